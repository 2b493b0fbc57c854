//! Degree-4 orthogonally invariant features and the two spectral-norm
//! surrogates built from them.
//!
//! The five degree-4 invariants are the squared norm squared (frob4), the
//! three per-mode frames trace((M_k M_kᵀ)²), and the tetrahedron contraction
//! Σ t_ace t_adf t_bde t_bcf. Both surrogate norms take the value 1 on unit
//! rank-1 tensors:
//!
//!   sigma4(T)⁴ = (3·frob4 + 6·(frame1+frame2+frame3) + 6·tetra) / 27
//!   sharp(T)⁴  = (frame1 + frame2 + frame3 + 2·tetra) / 5

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor3::{norm, random_unit_vector, Matrix, Tensor3};

/// Entry budget for the tetrahedron's Gram intermediate.
pub const DEFAULT_TETRA_BUDGET: usize = 100_000_000;

/// The five degree-4 invariant scalars of a 3-way tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeFourInvariants {
    /// ‖T‖⁴ (two disjoint triple-edge pairs).
    pub frob4: f64,
    /// trace((M₁M₁ᵀ)²) for the mode-1 flattening M₁.
    pub frame1: f64,
    /// trace((M₂M₂ᵀ)²).
    pub frame2: f64,
    /// trace((M₃M₃ᵀ)²).
    pub frame3: f64,
    /// Σ t_ace t_adf t_bde t_bcf.
    pub tetra: f64,
}

/// Frame invariant of a mode: squared Frobenius norm of the flattening Gram,
/// ‖M_k M_kᵀ‖_F² = Σᵢ σᵢ⁴.
pub fn frame(t: &Tensor3, mode: usize) -> Result<f64> {
    let m = t.flatten(mode)?;
    let gram = m.gram_rows();
    Ok(gram.data().iter().map(|x| x * x).sum())
}

/// Tetrahedron invariant Σ t_ace t_adf t_bde t_bcf via the pair-Gram
/// intermediate W[(i,k),(j,l)] = Σ_e t_ike t_jle; the value is
/// Σ W[(i,k),(j,l)]·W[(i,l),(j,k)]. Contracts mode 3 first when p ≤ r,
/// otherwise swaps modes 1 and 3 (the invariant is mode-symmetric).
pub fn tetrahedron(t: &Tensor3) -> Result<f64> {
    tetrahedron_with_budget(t, DEFAULT_TETRA_BUDGET)
}

pub fn tetrahedron_with_budget(t: &Tensor3, budget: usize) -> Result<f64> {
    let (p, _, r) = t.dims();
    let swapped;
    let view = if p <= r {
        t
    } else {
        swapped = t.permute_modes([2, 1, 0])?;
        &swapped
    };
    let (p, q, r) = view.dims();
    let pq = p * q;
    if pq.saturating_mul(pq) > budget {
        return Err(Error::ResourceLimit(format!(
            "tetrahedron intermediate of {} entries exceeds budget {budget}",
            pq * pq
        )));
    }
    // W = X Xᵀ where X is the (pq)×r matrix with X[i + p·k, e] = t_ike;
    // in the storage layout X shares the tensor buffer.
    let x = Matrix::new(pq, r, view.data().to_vec())?;
    let w = x.gram_rows();
    let wd = w.data();
    let mut acc = 0.0;
    for l in 0..q {
        for k in 0..q {
            for j in 0..p {
                let a_base = p * k + pq * (j + p * l);
                let b_base = p * l + pq * (j + p * k);
                let a_row = &wd[a_base..a_base + p];
                let b_row = &wd[b_base..b_base + p];
                acc += a_row
                    .iter()
                    .zip(b_row)
                    .map(|(x, y)| x * y)
                    .sum::<f64>();
            }
        }
    }
    Ok(acc)
}

/// All five degree-4 invariants.
pub fn invariants(t: &Tensor3) -> Result<DegreeFourInvariants> {
    let norm2 = t.inner(t)?;
    Ok(DegreeFourInvariants {
        frob4: norm2 * norm2,
        frame1: frame(t, 1)?,
        frame2: frame(t, 2)?,
        frame3: frame(t, 3)?,
        tetra: tetrahedron(t)?,
    })
}

fn quartic_root(v: f64) -> f64 {
    // clamp absorbs -1e-16-scale rounding on near-zero tensors
    v.max(0.0).powf(0.25)
}

/// Fourth power of the degree-4 sphere-average norm.
pub fn sigma4_pow4(t: &Tensor3) -> Result<f64> {
    let inv = invariants(t)?;
    Ok(sigma4_pow4_from(&inv))
}

pub fn sigma4_pow4_from(inv: &DegreeFourInvariants) -> f64 {
    (3.0 * inv.frob4 + 6.0 * (inv.frame1 + inv.frame2 + inv.frame3) + 6.0 * inv.tetra) / 27.0
}

/// The degree-4 sphere-average norm; equals 1 on unit rank-1 tensors.
pub fn sigma4(t: &Tensor3) -> Result<f64> {
    Ok(quartic_root(sigma4_pow4(t)?))
}

/// Fourth power of the sharp norm.
pub fn sharp_pow4(t: &Tensor3) -> Result<f64> {
    let inv = invariants(t)?;
    Ok(sharp_pow4_from(&inv))
}

pub fn sharp_pow4_from(inv: &DegreeFourInvariants) -> f64 {
    (inv.frame1 + inv.frame2 + inv.frame3 + 2.0 * inv.tetra) / 5.0
}

/// The sharp norm, the tighter of the two degree-4 spectral surrogates;
/// equals 1 on unit rank-1 tensors.
pub fn sharp(t: &Tensor3) -> Result<f64> {
    Ok(quartic_root(sharp_pow4(t)?))
}

/// Exact sphere average of sigma4⁴ over unit tensors in R^{p×q×r}:
/// (pqr + 2(pq+pr+qr) + 4(p+q+r) + 8) / (9(pqr + 2)).
pub fn expected_sigma4_pow4(p: usize, q: usize, r: usize) -> f64 {
    let (p, q, r) = (p as f64, q as f64, r as f64);
    (p * q * r + 2.0 * (p * q + p * r + q * r) + 4.0 * (p + q + r) + 8.0) / (9.0 * (p * q * r + 2.0))
}

/// Exact sphere average of sharp⁴ over unit tensors in R^{p×q×r}:
/// ((pq+pr+qr) + 3(p+q+r) + 3) / (5(pqr + 2)).
pub fn expected_sharp_pow4(p: usize, q: usize, r: usize) -> f64 {
    let (p, q, r) = (p as f64, q as f64, r as f64);
    ((p * q + p * r + q * r) + 3.0 * (p + q + r) + 3.0) / (5.0 * (p * q * r + 2.0))
}

/// Lower bound on the spectral norm sup |T·(a⊗b⊗c)|: the best value found by
/// rank-1 alternating updates from `starts` random unit initializations.
pub fn spectral_lower_bound<R: Rng + ?Sized>(
    t: &Tensor3,
    starts: usize,
    rng: &mut R,
) -> Result<f64> {
    if starts == 0 {
        return Err(Error::Invalid("spectral_lower_bound: starts >= 1".into()));
    }
    let (p, q, r) = t.dims();
    if t.frobenius() == 0.0 {
        return Ok(0.0);
    }
    let mut best = 0.0f64;
    for _ in 0..starts {
        let mut a = random_unit_vector(p, rng);
        let mut b = random_unit_vector(q, rng);
        let mut c = random_unit_vector(r, rng);
        let mut value = 0.0f64;
        for _ in 0..500 {
            let an = contract_bc(t, &b, &c);
            if !normalize(&mut a, an) {
                break;
            }
            let bn = contract_ac(t, &a, &c);
            if !normalize(&mut b, bn) {
                break;
            }
            let cn = contract_ab(t, &a, &b);
            let nv = norm(&cn);
            if nv < 1e-300 {
                break;
            }
            c = cn.iter().map(|x| x / nv).collect();
            if (nv - value).abs() <= 1e-12 * nv.max(1.0) {
                value = nv;
                break;
            }
            value = nv;
        }
        best = best.max(value.abs());
    }
    Ok(best)
}

fn normalize(dst: &mut Vec<f64>, src: Vec<f64>) -> bool {
    let n = norm(&src);
    if n < 1e-300 {
        return false;
    }
    *dst = src.iter().map(|x| x / n).collect();
    true
}

fn contract_bc(t: &Tensor3, b: &[f64], c: &[f64]) -> Vec<f64> {
    let (p, q, r) = t.dims();
    let mut out = vec![0.0; p];
    for k in 0..r {
        if c[k] == 0.0 {
            continue;
        }
        for j in 0..q {
            let w = b[j] * c[k];
            if w != 0.0 {
                let fib = &t.data()[p * (j + q * k)..p * (j + q * k) + p];
                for (o, v) in out.iter_mut().zip(fib) {
                    *o += w * v;
                }
            }
        }
    }
    out
}

fn contract_ac(t: &Tensor3, a: &[f64], c: &[f64]) -> Vec<f64> {
    let (p, q, r) = t.dims();
    let mut out = vec![0.0; q];
    for k in 0..r {
        if c[k] == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let fib = &t.data()[p * (j + q * k)..p * (j + q * k) + p];
            *o += c[k] * crate::tensor3::dot(fib, a);
        }
    }
    out
}

fn contract_ab(t: &Tensor3, a: &[f64], b: &[f64]) -> Vec<f64> {
    let (p, q, r) = t.dims();
    let mut out = vec![0.0; r];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..q {
            if b[j] != 0.0 {
                let fib = &t.data()[p * (j + q * k)..p * (j + q * k) + p];
                acc += b[j] * crate::tensor3::dot(fib, a);
            }
        }
        *o = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::ColoredBrauerDiagram;
    use crate::tensor3::{outer3, random_orthogonal, random_unit_rank1, random_unit_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Direct six-index loop; the independent oracle for the tetrahedron.
    fn tetra_loop(t: &Tensor3) -> f64 {
        let (p, q, r) = t.dims();
        let mut acc = 0.0;
        for a in 0..p {
            for b in 0..p {
                for c in 0..q {
                    for d in 0..q {
                        for e in 0..r {
                            for f in 0..r {
                                acc += t.get(a, c, e)
                                    * t.get(a, d, f)
                                    * t.get(b, d, e)
                                    * t.get(b, c, f);
                            }
                        }
                    }
                }
            }
        }
        acc
    }

    fn t1(n: usize) -> Tensor3 {
        let nn = n * n;
        let mut t = Tensor3::zeros((nn, nn, nn)).unwrap();
        for i in 0..nn {
            t.set(i, i, i, 1.0 / n as f64);
        }
        t
    }

    fn t2(n: usize) -> Tensor3 {
        let nn = n * n;
        let mut t = Tensor3::zeros((nn, nn, nn)).unwrap();
        let w = 1.0 / (n as f64 * (n as f64).sqrt());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.set(n * i + j, n * j + k, n * k + i, w);
                }
            }
        }
        t
    }

    #[test]
    fn frame_unit_rank1() {
        let mut r = rng(1);
        let t = random_unit_rank1((3, 4, 5), &mut r).unwrap().to_tensor();
        for mode in 1..=3 {
            assert!((frame(&t, mode).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(frame(&t, 0).is_err());
    }

    #[test]
    fn frame_structured_tensor() {
        let t = t1(2);
        for mode in 1..=3 {
            assert!((frame(&t, mode).unwrap() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_matches_generic_evaluator() {
        let mut r = rng(2);
        let t = random_unit_tensor((3, 4, 5), &mut r).unwrap();
        for mode in 1..=3 {
            let generic = ColoredBrauerDiagram::frame(mode)
                .unwrap()
                .evaluate(&t)
                .unwrap();
            let fast = frame(&t, mode).unwrap();
            assert!((generic - fast).abs() < 1e-12 * fast.max(1.0));
        }
    }

    #[test]
    fn tetrahedron_unit_rank1() {
        let mut r = rng(3);
        let t = random_unit_rank1((4, 3, 5), &mut r).unwrap().to_tensor();
        assert!((tetrahedron(&t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_structured_tensors() {
        // T2's tetrahedron is n⁻³ (the n⁻² frames bound it by Cauchy-Schwarz)
        for n in [2usize, 3] {
            assert!((tetrahedron(&t1(n)).unwrap() - 1.0 / (n * n) as f64).abs() < 1e-12);
            assert!((tetrahedron(&t2(n)).unwrap() - 1.0 / (n * n * n) as f64).abs() < 1e-12);
            assert!((tetra_loop(&t2(n)) - 1.0 / (n * n * n) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn tetrahedron_matches_loop_oracle() {
        let mut r = rng(4);
        // both orderings of p vs r exercise both intermediate variants
        for dims in [(3, 4, 5), (5, 4, 3), (2, 5, 3)] {
            let t = random_unit_tensor(dims, &mut r).unwrap();
            let fast = tetrahedron(&t).unwrap();
            let slow = tetra_loop(&t);
            assert!(
                (fast - slow).abs() < 1e-12 * slow.abs().max(1.0),
                "dims {dims:?}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn tetrahedron_matches_generic_evaluator() {
        let mut r = rng(5);
        let t = random_unit_tensor((3, 4, 5), &mut r).unwrap();
        let generic = ColoredBrauerDiagram::tetrahedron().evaluate(&t).unwrap();
        let fast = tetrahedron(&t).unwrap();
        assert!((generic - fast).abs() < 1e-12 * fast.abs().max(1.0));
    }

    #[test]
    fn tetrahedron_budget_guard() {
        let mut r = rng(6);
        let t = random_unit_tensor((6, 6, 6), &mut r).unwrap();
        assert!(matches!(
            tetrahedron_with_budget(&t, 100),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn invariants_cases() {
        let mut r = rng(7);
        let unit = random_unit_rank1((3, 4, 5), &mut r).unwrap().to_tensor();
        let inv = invariants(&unit).unwrap();
        for v in [inv.frob4, inv.frame1, inv.frame2, inv.frame3, inv.tetra] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let inv1 = invariants(&t1(2)).unwrap();
        assert!((inv1.frob4 - 1.0).abs() < 1e-12);
        for v in [inv1.frame1, inv1.frame2, inv1.frame3, inv1.tetra] {
            assert!((v - 0.25).abs() < 1e-12);
        }
        // field-by-field cross-check against the generic evaluator
        let t = random_unit_tensor((3, 4, 5), &mut r).unwrap();
        let inv = invariants(&t).unwrap();
        let pairs = [
            (inv.frob4, ColoredBrauerDiagram::frobenius_pair()),
            (inv.frame1, ColoredBrauerDiagram::frame(1).unwrap()),
            (inv.frame2, ColoredBrauerDiagram::frame(2).unwrap()),
            (inv.frame3, ColoredBrauerDiagram::frame(3).unwrap()),
            (inv.tetra, ColoredBrauerDiagram::tetrahedron()),
        ];
        for (fast, diagram) in pairs {
            let generic = diagram.evaluate(&t).unwrap();
            assert!((fast - generic).abs() < 1e-12 * generic.abs().max(1.0));
        }
    }

    #[test]
    fn invariants_bounds_on_random_samples() {
        let mut r = rng(8);
        for _ in 0..50 {
            let t = random_unit_tensor((3, 4, 5), &mut r).unwrap();
            let inv = invariants(&t).unwrap();
            for v in [inv.frob4, inv.frame1, inv.frame2, inv.frame3, inv.tetra] {
                assert!(v >= 0.0);
            }
            for f in [inv.frame1, inv.frame2, inv.frame3] {
                assert!(f <= inv.frob4 + 1e-12);
            }
            assert!(inv.tetra <= inv.frob4 + 1e-12);
        }
    }

    #[test]
    fn sigma4_and_sharp_normalization() {
        let mut r = rng(9);
        for dims in [(2, 2, 2), (3, 4, 5), (6, 2, 4)] {
            let t = random_unit_rank1(dims, &mut r).unwrap().to_tensor();
            assert!((sigma4(&t).unwrap() - 1.0).abs() < 1e-12);
            assert!((sharp(&t).unwrap() - 1.0).abs() < 1e-12);
        }
        let z = Tensor3::zeros((2, 3, 4)).unwrap();
        assert_eq!(sigma4(&z).unwrap(), 0.0);
        assert_eq!(sharp(&z).unwrap(), 0.0);
    }

    #[test]
    fn norm_axioms_on_samples() {
        let mut r = rng(10);
        for _ in 0..200 {
            let t = random_unit_tensor((3, 4, 5), &mut r).unwrap();
            let s = random_unit_tensor((3, 4, 5), &mut r).unwrap();
            // absolute homogeneity (degree-4 homogeneous polynomial under the root)
            let c = -2.5f64;
            let ts = t.scale(c);
            assert!((sharp(&ts).unwrap() - c.abs() * sharp(&t).unwrap()).abs() < 1e-12 * 4.0);
            assert!((sigma4(&ts).unwrap() - c.abs() * sigma4(&t).unwrap()).abs() < 1e-12 * 4.0);
            // triangle inequality
            let sum = crate::tensor3::linear_combine(&[(1.0, &t), (1.0, &s)]).unwrap();
            assert!(sharp(&sum).unwrap() <= sharp(&t).unwrap() + sharp(&s).unwrap() + 1e-12);
            assert!(sigma4(&sum).unwrap() <= sigma4(&t).unwrap() + sigma4(&s).unwrap() + 1e-12);
        }
    }

    #[test]
    fn mode_permutation_permutes_frames() {
        let mut r = rng(11);
        let t = random_unit_tensor((3, 4, 5), &mut r).unwrap();
        let inv = invariants(&t).unwrap();
        let swapped = t.permute_modes([1, 0, 2]).unwrap(); // modes 1 and 2 exchanged
        let inv_s = invariants(&swapped).unwrap();
        assert!((inv_s.frame1 - inv.frame2).abs() < 1e-12);
        assert!((inv_s.frame2 - inv.frame1).abs() < 1e-12);
        assert!((inv_s.frame3 - inv.frame3).abs() < 1e-12);
        assert!((inv_s.frob4 - inv.frob4).abs() < 1e-12);
        assert!((inv_s.tetra - inv.tetra).abs() < 1e-12 * inv.tetra.abs().max(1.0));
    }

    #[test]
    fn orthogonal_invariance() {
        let mut r = rng(12);
        let t = random_unit_tensor((4, 5, 6), &mut r).unwrap();
        let inv = invariants(&t).unwrap();
        for _ in 0..5 {
            let a = random_orthogonal(4, &mut r);
            let b = random_orthogonal(5, &mut r);
            let c = random_orthogonal(6, &mut r);
            let rotated = t
                .mode_multiply(&a, 1)
                .unwrap()
                .mode_multiply(&b, 2)
                .unwrap()
                .mode_multiply(&c, 3)
                .unwrap();
            let inv_r = invariants(&rotated).unwrap();
            for (x, y) in [
                (inv.frob4, inv_r.frob4),
                (inv.frame1, inv_r.frame1),
                (inv.frame2, inv_r.frame2),
                (inv.frame3, inv_r.frame3),
                (inv.tetra, inv_r.tetra),
            ] {
                assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn expectation_formulas() {
        assert!((expected_sigma4_pow4(1, 1, 1) - 1.0).abs() < 1e-15);
        assert!((expected_sigma4_pow4(2, 2, 2) - 64.0 / 90.0).abs() < 1e-15);
        assert!((expected_sharp_pow4(1, 1, 1) - 1.0).abs() < 1e-15);
        assert!((expected_sharp_pow4(2, 2, 2) - 33.0 / 50.0).abs() < 1e-15);
        // the sharp expectation sits below sigma4's once two dims exceed 1
        assert!(expected_sharp_pow4(2, 2, 2) < expected_sigma4_pow4(2, 2, 2));
        assert!(expected_sharp_pow4(3, 4, 5) < expected_sigma4_pow4(3, 4, 5));
        assert!((expected_sharp_pow4(1, 1, 7) - expected_sigma4_pow4(1, 1, 7)).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_expectations_small() {
        // reduced-scale check; the full-resolution run lives in the
        // acceptance suite
        let mut r = rng(13);
        let (p, q, r_) = (3, 4, 5);
        let draws = 20_000;
        let mut sum_s = 0.0;
        let mut sum_h = 0.0;
        let mut sq_s = 0.0;
        let mut sq_h = 0.0;
        for _ in 0..draws {
            let t = random_unit_tensor((p, q, r_), &mut r).unwrap();
            let inv = invariants(&t).unwrap();
            let s = sigma4_pow4_from(&inv);
            let h = sharp_pow4_from(&inv);
            sum_s += s;
            sum_h += h;
            sq_s += s * s;
            sq_h += h * h;
        }
        let n = draws as f64;
        let mean_s = sum_s / n;
        let mean_h = sum_h / n;
        let se_s = ((sq_s / n - mean_s * mean_s) / n).sqrt();
        let se_h = ((sq_h / n - mean_h * mean_h) / n).sqrt();
        assert!((mean_s - expected_sigma4_pow4(p, q, r_)).abs() < 4.0 * se_s);
        assert!((mean_h - expected_sharp_pow4(p, q, r_)).abs() < 4.0 * se_h);
        assert!(mean_h < mean_s);
    }

    #[test]
    fn spectral_lower_bound_rank1() {
        let mut r = rng(14);
        let t = random_unit_rank1((4, 5, 6), &mut r).unwrap().to_tensor();
        let v = spectral_lower_bound(&t, 3, &mut r).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        assert!(spectral_lower_bound(&t, 0, &mut r).is_err());
    }

    #[test]
    fn spectral_lower_bound_diagonal() {
        // spectral norm of diag(1, 0.5) placed on the main diagonal is 1;
        // cross-checked by a coarse grid over the product of circles
        let mut t = Tensor3::zeros((2, 2, 2)).unwrap();
        t.set(0, 0, 0, 1.0);
        t.set(1, 1, 1, 0.5);
        let mut r = rng(15);
        let v = spectral_lower_bound(&t, 5, &mut r).unwrap();
        assert!((v - 1.0).abs() < 1e-8);

        let mut grid_best = 0.0f64;
        let steps = 180;
        for ai in 0..steps {
            let alpha = std::f64::consts::PI * ai as f64 / steps as f64;
            for bi in 0..steps {
                let beta = std::f64::consts::PI * bi as f64 / steps as f64;
                for ci in 0..steps {
                    let gamma = std::f64::consts::PI * ci as f64 / steps as f64;
                    let val = alpha.cos() * beta.cos() * gamma.cos()
                        + 0.5 * alpha.sin() * beta.sin() * gamma.sin();
                    grid_best = grid_best.max(val.abs());
                }
            }
        }
        assert!((grid_best - 1.0).abs() < 1e-3);
        assert!(v >= grid_best - 1e-3);
    }

    #[test]
    fn spectral_sandwich_on_samples() {
        let mut r = rng(16);
        for _ in 0..10 {
            let t = random_unit_tensor((3, 4, 5), &mut r).unwrap().scale(2.0);
            let slb = spectral_lower_bound(&t, 4, &mut r).unwrap();
            let sh = sharp(&t).unwrap();
            let sg = sigma4(&t).unwrap();
            let fro = t.frobenius();
            assert!(slb <= sh + 1e-9);
            assert!(slb <= sg + 1e-9);
            assert!(sh <= fro + 1e-9);
            assert!(sg <= fro + 1e-9);
        }
    }

    #[test]
    fn zero_tensor_lower_bound() {
        let z = Tensor3::zeros((3, 3, 3)).unwrap();
        let mut r = rng(17);
        assert_eq!(spectral_lower_bound(&z, 2, &mut r).unwrap(), 0.0);
    }

    #[test]
    fn rank1_scaling_of_structured_frames() {
        // frame/frob4 ratio for the diagonal family is n⁻²
        for n in [2usize, 3] {
            let t = t1(n);
            let inv = invariants(&t).unwrap();
            let ratio = inv.frame1 / inv.frob4;
            assert!((ratio - 1.0 / (n * n) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn outer_product_frame_consistency() {
        // flatten of a⊗b⊗c has one singular value ‖a‖‖b‖‖c‖
        let a = vec![1.0, 2.0];
        let b = vec![0.5, -1.0, 2.0];
        let c = vec![3.0, 4.0];
        let t = outer3(&a, &b, &c).unwrap();
        let sigma2 = norm(&a).powi(2) * norm(&b).powi(2) * norm(&c).powi(2);
        for mode in 1..=3 {
            assert!((frame(&t, mode).unwrap() - sigma2 * sigma2).abs() < 1e-9);
        }
    }
}
