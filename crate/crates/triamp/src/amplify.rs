//! Low-rank amplification maps: gradients of the fourth powers of the
//! degree-4 spectral surrogates, plus the cubing map for matrices.
//!
//! Both tensor maps are cubic, equivariant under per-mode orthogonal actions,
//! and fix the direction of unit rank-1 tensors (scaling them by 4). Applied
//! before a rank-1 initializer they boost dominant rank-1 structure while
//! damping noise.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor3::{fold, linear_combine, Matrix, Tensor3};

/// Which amplification to apply before a rank-1 initializer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AmplifierKind {
    /// No amplification: the tensor passes through unchanged.
    Identity,
    /// Gradient of sigma4⁴.
    Sigma4,
    /// Gradient of sharp⁴.
    Sharp,
}

impl fmt::Display for AmplifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmplifierKind::Identity => "identity",
            AmplifierKind::Sigma4 => "sigma4",
            AmplifierKind::Sharp => "sharp",
        })
    }
}

impl FromStr for AmplifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(AmplifierKind::Identity),
            "sigma4" => Ok(AmplifierKind::Sigma4),
            "sharp" => Ok(AmplifierKind::Sharp),
            other => Err(Error::Parse(format!(
                "unknown amplifier kind {other:?} (expected identity|sigma4|sharp)"
            ))),
        }
    }
}

/// Quarter-gradient of the mode-k frame: fold(M MᵀM, k) for the mode-k
/// flattening M, so that ∇frame(·, k) = 4·frame_gradient(·, k).
pub fn frame_gradient(t: &Tensor3, mode: usize) -> Result<Tensor3> {
    let m = t.flatten(mode)?;
    let gram = m.gram_rows();
    fold(&gram.matmul(&m)?, mode, t.dims())
}

/// Quarter-gradient of the tetrahedron invariant:
/// G[β,γ,φ] = Σ_{a,d,e} t[a,γ,e]·t[a,d,φ]·t[β,d,e], with ∇tetra = 4·G.
///
/// Computed through the pair-Gram W[(a,γ),(β,d)] = Σ_e t[a,γ,e]·t[β,d,e]
/// after rotating the largest dimension into mode 3 to keep the intermediate
/// small (the map commutes with mode permutations).
pub fn tetra_gradient(t: &Tensor3) -> Result<Tensor3> {
    tetra_gradient_with_budget(t, crate::norms::DEFAULT_TETRA_BUDGET)
}

pub fn tetra_gradient_with_budget(t: &Tensor3, budget: usize) -> Result<Tensor3> {
    let (p, q, r) = t.dims();
    // route the largest dimension to the contracted slot
    let axes: [usize; 3] = if r >= p && r >= q {
        [0, 1, 2]
    } else if p >= q {
        [2, 1, 0]
    } else {
        [0, 2, 1]
    };
    let view;
    let working = if axes == [0, 1, 2] {
        t
    } else {
        view = t.permute_modes(axes)?;
        &view
    };
    let (p, q, r) = working.dims();
    let pq = p * q;
    if pq.saturating_mul(pq) > budget {
        return Err(Error::ResourceLimit(format!(
            "tetra gradient intermediate of {} entries exceeds budget {budget}",
            pq * pq
        )));
    }
    let x = Matrix::new(pq, r, working.data().to_vec())?;
    let w = x.gram_rows();
    let wd = w.data();
    let td = working.data();
    let mut g = Tensor3::zeros((p, q, r))?;
    for phi in 0..r {
        for gamma in 0..q {
            for beta in 0..p {
                let mut acc = 0.0;
                for d in 0..q {
                    let w_col = &wd[p * gamma + pq * (beta + p * d)..];
                    let t_fib = &td[p * (d + q * phi)..];
                    for a in 0..p {
                        acc += w_col[a] * t_fib[a];
                    }
                }
                g.set(beta, gamma, phi, acc);
            }
        }
    }
    if axes == [0, 1, 2] {
        Ok(g)
    } else {
        // the transpositions used above are involutions
        g.permute_modes(axes)
    }
}

/// Gradient of sharp⁴:
/// (4/5)·(frame_gradient₁ + frame_gradient₂ + frame_gradient₃ + 2·tetra_gradient).
pub fn phi_sharp(t: &Tensor3) -> Result<Tensor3> {
    let f1 = frame_gradient(t, 1)?;
    let f2 = frame_gradient(t, 2)?;
    let f3 = frame_gradient(t, 3)?;
    let tg = tetra_gradient(t)?;
    linear_combine(&[
        (4.0 / 5.0, &f1),
        (4.0 / 5.0, &f2),
        (4.0 / 5.0, &f3),
        (8.0 / 5.0, &tg),
    ])
}

/// Gradient of sigma4⁴:
/// (4/9)·(‖T‖²·T + 2·Σ frame_gradientₖ + 2·tetra_gradient).
pub fn phi_sigma4(t: &Tensor3) -> Result<Tensor3> {
    let norm2 = t.inner(t)?;
    let f1 = frame_gradient(t, 1)?;
    let f2 = frame_gradient(t, 2)?;
    let f3 = frame_gradient(t, 3)?;
    let tg = tetra_gradient(t)?;
    linear_combine(&[
        (4.0 / 9.0 * norm2, t),
        (8.0 / 9.0, &f1),
        (8.0 / 9.0, &f2),
        (8.0 / 9.0, &f3),
        (8.0 / 9.0, &tg),
    ])
}

/// Matrix amplification A ↦ AAᵀA / ‖AAᵀA‖: cubes the singular values (then
/// renormalizes) while keeping the singular vectors.
pub fn matrix_theta(a: &Matrix) -> Result<Matrix> {
    if a.data().iter().all(|v| *v == 0.0) {
        return Err(Error::Invalid("matrix_theta: zero matrix".into()));
    }
    let cubed = if a.rows() <= a.cols() {
        a.gram_rows().matmul(a)?
    } else {
        a.matmul(&a.gram_cols())?
    };
    let n = cubed.frobenius();
    if n == 0.0 {
        return Err(Error::Invalid("matrix_theta: zero matrix".into()));
    }
    Ok(cubed.scale(1.0 / n))
}

/// Dispatch on the amplifier kind; `Identity` returns the input unchanged.
pub fn amplify(t: &Tensor3, kind: AmplifierKind) -> Result<Tensor3> {
    match kind {
        AmplifierKind::Identity => Ok(t.clone()),
        AmplifierKind::Sigma4 => phi_sigma4(t),
        AmplifierKind::Sharp => phi_sharp(t),
    }
}
