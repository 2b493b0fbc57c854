//! Colored Brauer diagram combinatorics.
//!
//! A diagram on d vertices is an overlay of three perfect matchings, one per
//! color; colors correspond to tensor modes (red ↔ mode 1, green ↔ mode 2,
//! blue ↔ mode 3). Evaluating a diagram on a tensor contracts d copies of the
//! tensor along the matched slots, producing an invariant of the per-mode
//! orthogonal group actions. Vertices are 0-based internally; the text format
//! uses 1-based labels, e.g. `red: (1 2)(3 4)`.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::tensor3::Tensor3;

/// Largest vertex count accepted by the matching enumerator.
pub const MAX_ENUMERATION_VERTICES: usize = 12;
/// Largest vertex count for which brute-force canonical forms are attempted.
pub const MAX_CANONICAL_VERTICES: usize = 8;
/// Entry budget for explicit single-color diagram tensors.
pub const MAX_DIAGRAM_TENSOR_ENTRIES: usize = 1 << 22;
/// Default entry budget for the largest intermediate of a contraction.
pub const DEFAULT_CONTRACTION_BUDGET: usize = 100_000_000;

/// Perfect matching on vertices {0, .., d-1}: d/2 unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    d: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Pairs may come in any order; they must partition {0, .., d-1}.
    pub fn new(d: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if d == 0 || d % 2 != 0 {
            return Err(Error::Invalid(format!(
                "matching needs a positive even vertex count, got {d}"
            )));
        }
        if pairs.len() != d / 2 {
            return Err(Error::Invalid(format!(
                "matching on {d} vertices needs {} pairs, got {}",
                d / 2,
                pairs.len()
            )));
        }
        let mut seen = vec![false; d];
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(d / 2);
        for &(a, b) in &pairs {
            if a >= d || b >= d || a == b {
                return Err(Error::Invalid(format!("bad pair ({a}, {b}) for d = {d}")));
            }
            if seen[a] || seen[b] {
                return Err(Error::Invalid(format!(
                    "vertex {} appears in more than one pair",
                    if seen[a] { a } else { b }
                )));
            }
            seen[a] = true;
            seen[b] = true;
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        Ok(Self {
            d,
            pairs: normalized,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.d
    }

    /// Pairs in normalized order: each (lo, hi), sorted by lo.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// partner[v] = the vertex matched with v.
    pub fn partners(&self) -> Vec<usize> {
        let mut partner = vec![0usize; self.d];
        for &(a, b) in &self.pairs {
            partner[a] = b;
            partner[b] = a;
        }
        partner
    }

    /// Index of the pair containing v (position in `pairs()`).
    pub fn pair_index(&self, v: usize) -> usize {
        self.pairs
            .iter()
            .position(|&(a, b)| a == v || b == v)
            .expect("vertex within range")
    }

    /// Apply a vertex relabeling: vertex v becomes perm[v].
    pub fn relabel(&self, perm: &[usize]) -> Matching {
        let mut pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        pairs.sort_unstable();
        Matching { d: self.d, pairs }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(a, b) in &self.pairs {
            write!(f, "({} {})", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// All perfect matchings on d vertices; there are (d-1)!! of them.
pub fn enumerate_matchings(d: usize) -> Result<Vec<Matching>> {
    if d == 0 || d % 2 != 0 {
        return Err(Error::Invalid(format!(
            "cannot enumerate matchings on {d} vertices"
        )));
    }
    if d > MAX_ENUMERATION_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "matching enumeration guarded at d <= {MAX_ENUMERATION_VERTICES}, got {d}"
        )));
    }
    let mut out = Vec::new();
    let mut used = vec![false; d];
    let mut pairs = Vec::with_capacity(d / 2);
    fn rec(
        d: usize,
        used: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<Matching>,
    ) {
        let Some(first) = used.iter().position(|u| !u) else {
            out.push(Matching {
                d,
                pairs: pairs.clone(),
            });
            return;
        };
        used[first] = true;
        for second in first + 1..d {
            if !used[second] {
                used[second] = true;
                pairs.push((first, second));
                rec(d, used, pairs, out);
                pairs.pop();
                used[second] = false;
            }
        }
        used[first] = false;
    }
    rec(d, &mut used, &mut pairs, &mut out);
    Ok(out)
}

/// Number of cycles (2-cycles included) in the union multigraph of two
/// matchings. Every vertex has one edge from each matching, so the union is a
/// disjoint collection of even cycles.
pub fn overlay_cycle_count(m1: &Matching, m2: &Matching) -> Result<usize> {
    if m1.d != m2.d {
        return Err(Error::Shape(format!(
            "overlay: {} vs {} vertices",
            m1.d, m2.d
        )));
    }
    let p1 = m1.partners();
    let p2 = m2.partners();
    let mut visited = vec![false; m1.d];
    let mut cycles = 0;
    for start in 0..m1.d {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut v = start;
        loop {
            visited[v] = true;
            let w = p1[v];
            visited[w] = true;
            v = p2[w];
            if v == start {
                break;
            }
        }
    }
    Ok(cycles)
}

/// Inner product of the two single-color diagram tensors in dimension n:
/// n^(number of overlay cycles).
pub fn single_color_diagram_dot(m1: &Matching, m2: &Matching, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let cycles = overlay_cycle_count(m1, m2)?;
    Ok((n as f64).powi(cycles as i32))
}

/// Explicit 0/1 tensor of a single-color diagram: entry at a multi-index is 1
/// exactly when matched positions carry equal indices. Flat layout is
/// row-major with the last vertex index fastest; the tensor has n^(d/2) ones.
pub fn build_diagram_tensor(m: &Matching, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let d = m.d;
    let size = n
        .checked_pow(d as u32)
        .filter(|&s| s <= MAX_DIAGRAM_TENSOR_ENTRIES)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "diagram tensor n^d = {n}^{d} exceeds {MAX_DIAGRAM_TENSOR_ENTRIES} entries"
            ))
        })?;
    let mut out = vec![0.0; size];
    // one free index per edge; matched positions share it
    let e = d / 2;
    let mut edge_idx = vec![0usize; e];
    loop {
        let mut flat = 0usize;
        for v in 0..d {
            flat = flat * n + edge_idx[m.pair_index(v)];
        }
        out[flat] = 1.0;
        // odometer over the e free indices
        let mut pos = e;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            edge_idx[pos] += 1;
            if edge_idx[pos] < n {
                break;
            }
            edge_idx[pos] = 0;
        }
    }
}

/// Overlay of three perfect matchings (red/green/blue ↔ modes 1/2/3) on the
/// same vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredBrauerDiagram {
    d: usize,
    red: Matching,
    green: Matching,
    blue: Matching,
}

impl ColoredBrauerDiagram {
    pub fn new(red: Matching, green: Matching, blue: Matching) -> Result<Self> {
        let d = red.d;
        if green.d != d || blue.d != d {
            return Err(Error::Shape(format!(
                "colored diagram needs matchings on equal vertex sets: {}/{}/{}",
                red.d, green.d, blue.d
            )));
        }
        Ok(Self {
            d,
            red,
            green,
            blue,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.d
    }

    pub fn red(&self) -> &Matching {
        &self.red
    }

    pub fn green(&self) -> &Matching {
        &self.green
    }

    pub fn blue(&self) -> &Matching {
        &self.blue
    }

    /// The unique 2-vertex diagram: one pair joined by all three colors.
    /// Evaluates to ‖T‖².
    pub fn single_pair() -> Self {
        let m = || Matching::new(2, vec![(0, 1)]).expect("valid");
        Self {
            d: 2,
            red: m(),
            green: m(),
            blue: m(),
        }
    }

    /// Two disjoint triple-edge pairs on 4 vertices. Evaluates to ‖T‖⁴.
    pub fn frobenius_pair() -> Self {
        let m = || Matching::new(4, vec![(0, 2), (1, 3)]).expect("valid");
        Self {
            d: 4,
            red: m(),
            green: m(),
            blue: m(),
        }
    }

    /// Frame diagram for a mode: that color's edges cross between the two
    /// doubled pairs. Evaluates to trace((M Mᵀ)²) for the mode's flattening M.
    pub fn frame(mode: usize) -> Result<Self> {
        let crossing = Matching::new(4, vec![(0, 1), (2, 3)])?;
        let doubled = Matching::new(4, vec![(0, 2), (1, 3)])?;
        let (red, green, blue) = match mode {
            1 => (crossing, doubled.clone(), doubled),
            2 => (doubled.clone(), crossing, doubled),
            3 => (doubled.clone(), doubled, crossing),
            _ => {
                return Err(Error::Invalid(format!(
                    "frame diagram: mode {mode} not in 1..=3"
                )))
            }
        };
        Ok(Self {
            d: 4,
            red,
            green,
            blue,
        })
    }

    /// The connected 4-vertex diagram with all three colors pairwise distinct.
    /// Evaluates to Σ t_ace t_adf t_bde t_bcf.
    pub fn tetrahedron() -> Self {
        Self {
            d: 4,
            red: Matching::new(4, vec![(0, 1), (2, 3)]).expect("valid"),
            green: Matching::new(4, vec![(0, 3), (1, 2)]).expect("valid"),
            blue: Matching::new(4, vec![(0, 2), (1, 3)]).expect("valid"),
        }
    }

    /// True when the union of the three matchings is a connected graph.
    pub fn is_connected(&self) -> bool {
        let pr = self.red.partners();
        let pg = self.green.partners();
        let pb = self.blue.partners();
        let mut visited = vec![false; self.d];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in [pr[v], pg[v], pb[v]] {
                if !visited[w] {
                    visited[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.d
    }

    pub fn relabel(&self, perm: &[usize]) -> ColoredBrauerDiagram {
        ColoredBrauerDiagram {
            d: self.d,
            red: self.red.relabel(perm),
            green: self.green.relabel(perm),
            blue: self.blue.relabel(perm),
        }
    }

    /// Canonical key under vertex relabeling with colors held fixed:
    /// the lexicographic minimum over all d! relabelings of the serialized
    /// (red, green, blue) pair lists. Brute force; guarded for small d.
    pub fn canonical_key(&self) -> Result<Vec<usize>> {
        if self.d > MAX_CANONICAL_VERTICES {
            return Err(Error::ResourceLimit(format!(
                "canonical form guarded at d <= {MAX_CANONICAL_VERTICES}, got {}",
                self.d
            )));
        }
        let mut best: Option<Vec<usize>> = None;
        let mut key = vec![0usize; 3 * self.d];
        let mut pairs = vec![(0usize, 0usize); self.d / 2];
        for perm in (0..self.d).permutations(self.d) {
            let mut at = 0;
            for m in [&self.red, &self.green, &self.blue] {
                for (slot, &(a, b)) in pairs.iter_mut().zip(&m.pairs) {
                    let (x, y) = (perm[a], perm[b]);
                    *slot = (x.min(y), x.max(y));
                }
                pairs.sort_unstable();
                for &(a, b) in pairs.iter() {
                    key[at] = a;
                    key[at + 1] = b;
                    at += 2;
                }
            }
            if best.as_ref().map(|b| key < *b).unwrap_or(true) {
                best = Some(key.clone());
            }
        }
        Ok(best.expect("at least one permutation"))
    }

    /// Inner product of the diagram tensors of two colored diagrams in
    /// dimensions (p, q, r): the product over colors of dim^cycles.
    pub fn dot(&self, other: &ColoredBrauerDiagram, p: usize, q: usize, r: usize) -> Result<f64> {
        if self.d != other.d {
            return Err(Error::Shape(format!(
                "diagram dot: {} vs {} vertices",
                self.d, other.d
            )));
        }
        let cr = overlay_cycle_count(&self.red, &other.red)?;
        let cg = overlay_cycle_count(&self.green, &other.green)?;
        let cb = overlay_cycle_count(&self.blue, &other.blue)?;
        Ok((p as f64).powi(cr as i32) * (q as f64).powi(cg as i32) * (r as f64).powi(cb as i32))
    }

    /// Evaluate the degree-d invariant: contract d copies of `t`, red edges
    /// joining mode-1 slots, green mode-2, blue mode-3.
    pub fn evaluate(&self, t: &Tensor3) -> Result<f64> {
        self.evaluate_with_budget(t, DEFAULT_CONTRACTION_BUDGET)
    }

    /// As `evaluate`, refusing any contraction whose largest intermediate
    /// would exceed `budget` entries.
    pub fn evaluate_with_budget(&self, t: &Tensor3, budget: usize) -> Result<f64> {
        let (p, q, r) = t.dims();
        // shared row-major copy of t, axes ordered (mode1, mode2, mode3)
        let mut row_major = vec![0.0; p * q * r];
        for k in 0..r {
            for j in 0..q {
                for i in 0..p {
                    row_major[(i * q + j) * r + k] = t.get(i, j, k);
                }
            }
        }
        let mut nodes: Vec<Node> = (0..self.d)
            .map(|v| Node {
                axes: vec![
                    self.red.pair_index(v),
                    self.d / 2 + self.green.pair_index(v),
                    self.d + self.blue.pair_index(v),
                ],
                dims: vec![p, q, r],
                data: row_major.clone(),
            })
            .collect();

        // greedy pairwise contraction minimizing the output entry count,
        // ties broken by the (i, j) position
        while nodes.len() > 1 {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    let size = output_size(&nodes[i], &nodes[j]);
                    if best.map(|(_, _, s)| size < s).unwrap_or(true) {
                        best = Some((i, j, size));
                    }
                }
            }
            let (i, j, size) = best.expect("two or more nodes");
            if size > budget {
                return Err(Error::ResourceLimit(format!(
                    "contraction intermediate of {size} entries exceeds budget {budget}"
                )));
            }
            let b = nodes.remove(j);
            let a = std::mem::replace(
                &mut nodes[i],
                Node {
                    axes: vec![],
                    dims: vec![],
                    data: vec![],
                },
            );
            nodes[i] = contract(&a, &b);
        }
        let result = nodes.pop().expect("one node");
        debug_assert!(result.axes.is_empty());
        Ok(result.data[0])
    }
}

impl fmt::Display for ColoredBrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "red: {}", self.red)?;
        writeln!(f, "green: {}", self.green)?;
        write!(f, "blue: {}", self.blue)
    }
}

/// Formal linear combination Σ λᵢ Dᵢ of diagrams on a common vertex set.
#[derive(Debug, Clone)]
pub struct LinearDiagramCombination {
    terms: Vec<(f64, ColoredBrauerDiagram)>,
}

impl LinearDiagramCombination {
    pub fn new(terms: Vec<(f64, ColoredBrauerDiagram)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Invalid("empty diagram combination".into()));
        };
        let d = first.1.d;
        if terms.iter().any(|(_, t)| t.d != d) {
            return Err(Error::Shape(
                "diagram combination mixes vertex counts".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(f64, ColoredBrauerDiagram)] {
        &self.terms
    }

    pub fn evaluate(&self, t: &Tensor3) -> Result<f64> {
        let mut acc = 0.0;
        for (coeff, diagram) in &self.terms {
            acc += coeff * diagram.evaluate(t)?;
        }
        Ok(acc)
    }
}

/// Number of isomorphism classes of connected colored diagrams on d vertices,
/// where isomorphism relabels vertices and keeps colors fixed.
pub fn count_connected_classes(d: usize) -> Result<usize> {
    if d == 0 || d % 2 != 0 {
        return Err(Error::Invalid(format!("vertex count {d} must be even")));
    }
    if d > 6 {
        return Err(Error::ResourceLimit(format!(
            "connected census guarded at d <= 6, got {d}"
        )));
    }
    let matchings = enumerate_matchings(d)?;
    let mut classes: HashSet<Vec<usize>> = HashSet::new();
    for red in &matchings {
        for green in &matchings {
            for blue in &matchings {
                let diagram =
                    ColoredBrauerDiagram::new(red.clone(), green.clone(), blue.clone())?;
                if diagram.is_connected() {
                    classes.insert(diagram.canonical_key()?);
                }
            }
        }
    }
    Ok(classes.len())
}

/// Parse the diagram text format: one line per color, e.g. `red: (1 2)(3 4)`
/// with 1-based vertex labels. Lines may appear in any order; blank lines and
/// `#` comments are ignored.
pub fn parse_diagram(text: &str) -> Result<ColoredBrauerDiagram> {
    let mut red = None;
    let mut green = None;
    let mut blue = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (color, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `color: pairs` in {line:?}")))?;
        let slot = match color.trim() {
            "red" => &mut red,
            "green" => &mut green,
            "blue" => &mut blue,
            other => return Err(Error::Parse(format!("unknown color {other:?}"))),
        };
        if slot.is_some() {
            return Err(Error::Parse(format!("duplicate color {:?}", color.trim())));
        }
        *slot = Some(parse_pairs(rest)?);
    }
    let take = |m: Option<Vec<(usize, usize)>>, name: &str| {
        m.ok_or_else(|| Error::Parse(format!("missing color {name}")))
    };
    let red = take(red, "red")?;
    let green = take(green, "green")?;
    let blue = take(blue, "blue")?;
    let d = 2 * red.len();
    ColoredBrauerDiagram::new(
        Matching::new(d, red)?,
        Matching::new(d, green)?,
        Matching::new(d, blue)?,
    )
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for chunk in text.split(')') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let inner = chunk
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected `(a b)` got {chunk:?}")))?;
        let labels: Vec<usize> = inner
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad vertex label {s:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if labels.len() != 2 {
            return Err(Error::Parse(format!("pair {chunk:?}) needs two labels")));
        }
        if labels[0] == 0 || labels[1] == 0 {
            return Err(Error::Parse("vertex labels are 1-based".into()));
        }
        pairs.push((labels[0] - 1, labels[1] - 1));
    }
    if pairs.is_empty() {
        return Err(Error::Parse("no pairs found".into()));
    }
    Ok(pairs)
}

struct Node {
    axes: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<f64>, // row-major over `dims`
}

fn output_size(a: &Node, b: &Node) -> usize {
    let mut size = 1usize;
    for (axis, dim) in a.axes.iter().zip(&a.dims) {
        if !b.axes.contains(axis) {
            size = size.saturating_mul(*dim);
        }
    }
    for (axis, dim) in b.axes.iter().zip(&b.dims) {
        if !a.axes.contains(axis) {
            size = size.saturating_mul(*dim);
        }
    }
    size
}

fn contract(a: &Node, b: &Node) -> Node {
    let shared: Vec<usize> = a
        .axes
        .iter()
        .copied()
        .filter(|axis| b.axes.contains(axis))
        .collect();
    let a_free: Vec<usize> = (0..a.axes.len())
        .filter(|&i| !shared.contains(&a.axes[i]))
        .collect();
    let b_free: Vec<usize> = (0..b.axes.len())
        .filter(|&i| !shared.contains(&b.axes[i]))
        .collect();
    let a_shared_pos: Vec<usize> = shared
        .iter()
        .map(|axis| a.axes.iter().position(|x| x == axis).expect("shared"))
        .collect();
    let b_shared_pos: Vec<usize> = shared
        .iter()
        .map(|axis| b.axes.iter().position(|x| x == axis).expect("shared"))
        .collect();

    let fa: usize = a_free.iter().map(|&i| a.dims[i]).product();
    let fb: usize = b_free.iter().map(|&i| b.dims[i]).product();
    let s: usize = a_shared_pos.iter().map(|&i| a.dims[i]).product();

    // A -> (free..., shared...) and B -> (shared..., free...) row-major
    let a_order: Vec<usize> = a_free.iter().chain(&a_shared_pos).copied().collect();
    let b_order: Vec<usize> = b_shared_pos.iter().chain(&b_free).copied().collect();
    let a_perm = permute(&a.data, &a.dims, &a_order);
    let b_perm = permute(&b.data, &b.dims, &b_order);

    let mut out = vec![0.0; fa * fb];
    for i in 0..fa {
        let a_row = &a_perm[i * s..(i + 1) * s];
        let out_row = &mut out[i * fb..(i + 1) * fb];
        for (k, &av) in a_row.iter().enumerate() {
            if av != 0.0 {
                let b_row = &b_perm[k * fb..(k + 1) * fb];
                for (o, &bv) in out_row.iter_mut().zip(b_row) {
                    *o += av * bv;
                }
            }
        }
    }

    let mut axes = Vec::with_capacity(a_free.len() + b_free.len());
    let mut dims = Vec::with_capacity(axes.capacity());
    for &i in &a_free {
        axes.push(a.axes[i]);
        dims.push(a.dims[i]);
    }
    for &i in &b_free {
        axes.push(b.axes[i]);
        dims.push(b.dims[i]);
    }
    Node {
        axes,
        dims,
        data: out,
    }
}

/// Reorder a row-major dense array: output axis m is input axis order[m].
fn permute(data: &[f64], dims: &[usize], order: &[usize]) -> Vec<f64> {
    let nd = dims.len();
    if nd == 0 {
        return data.to_vec();
    }
    // input strides (row-major)
    let mut in_strides = vec![1usize; nd];
    for i in (0..nd - 1).rev() {
        in_strides[i] = in_strides[i + 1] * dims[i + 1];
    }
    let out_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let mut out = vec![0.0; data.len()];
    let mut out_multi = vec![0usize; nd];
    for (flat, slot) in out.iter_mut().enumerate() {
        // decode flat -> out_multi (row-major)
        let mut rem = flat;
        for m in (0..nd).rev() {
            out_multi[m] = rem % out_dims[m];
            rem /= out_dims[m];
        }
        let mut in_flat = 0usize;
        for m in 0..nd {
            in_flat += out_multi[m] * in_strides[order[m]];
        }
        *slot = data[in_flat];
    }
    out
}
