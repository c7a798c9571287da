//! Discrete positive measures: weighted point masses with exact ball masses,
//! the radial maximal function, grid-limited linear densities and
//! pushforwards.

use crate::error::Error;
use crate::real::{Cplx, Real};
use crate::Result;

/// Resolution standoff used by the potential machinery, in units of the
/// distance from the query point to its nearest atom. Ratios mu(B(x,r))/r of
/// a discretized density overshoot the density by 1 + O(s/r) at the jump
/// radii (s the atom spacing), so radii below ~256 nearest-atom distances are
/// excluded; the bound is capped at a quarter of the support extent so
/// coarse measures remain certified.
pub const RESOLUTION_STANDOFF: f64 = 256.0;

/// Finite positive measure given by atoms and weights. Construction merges
/// exactly coinciding atoms and canonicalizes the atom order, so equal
/// measures compare equal and all summation orders are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<T: Real> {
    atoms: Vec<Cplx<T>>,
    weights: Vec<T>,
}

/// Value of a functional that may be infinite (e.g. the maximal function at
/// an atom).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialValue<T: Real> {
    Finite(T),
    Infinite,
}

impl<T: Real> PotentialValue<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PotentialValue::Infinite)
    }

    pub fn finite(&self) -> Option<T> {
        match self {
            PotentialValue::Finite(v) => Some(*v),
            PotentialValue::Infinite => None,
        }
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (PotentialValue::Infinite, _) | (_, PotentialValue::Infinite) => PotentialValue::Infinite,
            (PotentialValue::Finite(a), PotentialValue::Finite(b)) => {
                PotentialValue::Finite(if a >= b { a } else { b })
            }
        }
    }
}

impl<T: Real> DiscreteMeasure<T> {
    pub fn new(atoms: Vec<Cplx<T>>, weights: Vec<T>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure("atoms and weights lengths differ".into()));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("measure needs at least one atom".into()));
        }
        for (a, w) in atoms.iter().zip(&weights) {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidMeasure("non-finite atom".into()));
            }
            if !(*w > T::zero()) || !w.is_finite() {
                return Err(Error::InvalidMeasure("weights must be positive and finite".into()));
            }
        }
        let mut idx: Vec<usize> = (0..atoms.len()).collect();
        idx.sort_by(|&i, &j| {
            (atoms[i].re, atoms[i].im).partial_cmp(&(atoms[j].re, atoms[j].im)).unwrap()
        });
        let mut out_atoms: Vec<Cplx<T>> = Vec::with_capacity(atoms.len());
        let mut out_weights: Vec<T> = Vec::with_capacity(atoms.len());
        for &i in &idx {
            if let Some(last) = out_atoms.last() {
                if *last == atoms[i] {
                    *out_weights.last_mut().unwrap() += weights[i];
                    continue;
                }
            }
            out_atoms.push(atoms[i]);
            out_weights.push(weights[i]);
        }
        Ok(DiscreteMeasure { atoms: out_atoms, weights: out_weights })
    }

    /// Dirac mass at a point.
    pub fn dirac(at: Cplx<T>) -> Self {
        DiscreteMeasure { atoms: vec![at], weights: vec![T::one()] }
    }

    /// Equal weights 1/n on the given points.
    pub fn uniform(points: Vec<Cplx<T>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidMeasure("uniform measure on no points".into()));
        }
        let w = T::one() / T::of(n as f64);
        Self::new(points, vec![w; n])
    }

    /// Discretization of normalized length on the segment [a, b]: n atoms at
    /// midpoints of equal subintervals, total mass `mass`.
    pub fn segment_length(a: Cplx<T>, b: Cplx<T>, n: usize, mass: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMeasure("need at least one atom".into()));
        }
        let mut atoms = Vec::with_capacity(n);
        for k in 0..n {
            let t = T::of((k as f64 + 0.5) / n as f64);
            atoms.push(a + (b - a) * t);
        }
        Self::new(atoms, vec![mass / T::of(n as f64); n])
    }

    pub fn atoms(&self) -> &[Cplx<T>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Rescales every weight by a positive factor.
    pub fn scaled(&self, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::InvalidMeasure("scale factor must be positive".into()));
        }
        Ok(DiscreteMeasure {
            atoms: self.atoms.clone(),
            weights: self.weights.iter().map(|&w| w * t).collect(),
        })
    }
}

/// Total mass of the measure. Weights are summed in sorted order, so the
/// result depends only on the multiset of weights; pushforwards that permute
/// atoms preserve it exactly.
pub fn total_mass<T: Real>(m: &DiscreteMeasure<T>) -> T {
    let mut ws = m.weights.clone();
    ws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ws.into_iter().sum()
}

/// Mass of the open ball B(x, r): atoms at distance strictly less than r.
pub fn ball_mass<T: Real>(m: &DiscreteMeasure<T>, x: Cplx<T>, r: T) -> T {
    let mut total = T::zero();
    for (a, w) in m.atoms.iter().zip(&m.weights) {
        if (*a - x).norm() < r {
            total += *w;
        }
    }
    total
}

/// Radial Hardy-Littlewood maximal function sup_r mu(B(x, r)) / r, computed
/// exactly: for a discrete measure the supremum is attained along the sorted
/// atom distances (left limits of the jump radii). Infinite iff an atom sits
/// at x.
pub fn maximal_function<T: Real>(m: &DiscreteMeasure<T>, x: Cplx<T>) -> PotentialValue<T> {
    maximal_function_resolved(m, x, T::zero())
}

/// Maximal function restricted to radii r >= standoff * (distance from x to
/// the nearest atom), capped at a quarter of the support's bounding-box
/// diagonal. For a discretized density the unrestricted supremum is
/// dominated by atom-pair spikes below the resolution scale (two atoms at
/// distance s contribute 4w/s at their midpoint); restricting to resolved
/// radii recovers the density the atoms represent. `standoff = 0` is the
/// exact supremum. Infinite iff an atom sits at x, for any standoff.
pub fn maximal_function_resolved<T: Real>(
    m: &DiscreteMeasure<T>,
    x: Cplx<T>,
    standoff: T,
) -> PotentialValue<T> {
    let mut pairs: Vec<(T, T)> = m
        .atoms
        .iter()
        .zip(&m.weights)
        .map(|(a, w)| ((*a - x).norm(), *w))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if pairs[0].0 == T::zero() {
        return PotentialValue::Infinite;
    }
    let (mut lo, mut hi) = (m.atoms[0], m.atoms[0]);
    for a in &m.atoms {
        lo = Cplx::new(lo.re.min(a.re), lo.im.min(a.im));
        hi = Cplx::new(hi.re.max(a.re), hi.im.max(a.im));
    }
    let extent = (hi - lo).norm();
    let r_min = (standoff * pairs[0].0).min(extent / T::of(4.0));
    let mut best = T::zero();
    let mut cum = T::zero();
    for (k, &(d, w)) in pairs.iter().enumerate() {
        cum += w;
        let last_of_tie = k + 1 == pairs.len() || pairs[k + 1].0 > d;
        if !last_of_tie {
            continue;
        }
        // mu(B(x, r)) jumps to `cum` just past d; the supremum over the jump
        // interval [max(d, r_min), next) sits at its left end.
        let r = if d >= r_min { d } else { r_min };
        if k + 1 < pairs.len() && pairs[k + 1].0 <= r {
            continue;
        }
        let v = cum / r;
        if v > best {
            best = v;
        }
    }
    PotentialValue::Finite(best)
}

/// One row of a linear-density table.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityRow<T: Real> {
    pub r: T,
    pub ratio: T,
}

/// Grid-limited linear density profile at x. `theta` is the ratio at the
/// smallest radius and `theta_star` the maximum over the grid; both are
/// estimates limited by the grid, never asserted as true limits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityTable<T: Real> {
    pub rows: Vec<DensityRow<T>>,
    pub theta: T,
    pub theta_star: T,
    pub label: String,
    /// True when an atom coincides with x, so the true ratios diverge.
    pub diverges: bool,
}

/// Ratio table mu(B(x, r)) / r over a decreasing radius grid.
pub fn linear_density<T: Real>(
    m: &DiscreteMeasure<T>,
    x: Cplx<T>,
    r_grid: &[T],
) -> Result<DensityTable<T>> {
    if r_grid.is_empty() {
        return Err(Error::InvalidArgument("empty radius grid".into()));
    }
    for r in r_grid {
        if !(*r > T::zero()) {
            return Err(Error::InvalidArgument("radii must be positive".into()));
        }
    }
    for w in r_grid.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidArgument("radius grid must be strictly decreasing".into()));
        }
    }
    let rows: Vec<DensityRow<T>> = r_grid
        .iter()
        .map(|&r| DensityRow { r, ratio: ball_mass(m, x, r) / r })
        .collect();
    let theta = rows.last().unwrap().ratio;
    let theta_star = rows
        .iter()
        .map(|row| row.ratio)
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let diverges = m.atoms.iter().any(|a| *a == x);
    Ok(DensityTable {
        rows,
        theta,
        theta_star,
        label: "grid-limited".to_string(),
        diverges,
    })
}

/// Image measure under a point transformation; weights are carried over and
/// coinciding images are merged.
pub fn pushforward<T: Real, F>(m: &DiscreteMeasure<T>, map: F) -> Result<DiscreteMeasure<T>>
where
    F: Fn(Cplx<T>) -> Option<Cplx<T>>,
{
    let mut atoms = Vec::with_capacity(m.len());
    for (i, a) in m.atoms.iter().enumerate() {
        match map(*a) {
            Some(img) => atoms.push(img),
            None => {
                return Err(Error::PushforwardFailed {
                    index: i,
                    re: a.re.as_f64(),
                    im: a.im.as_f64(),
                })
            }
        }
    }
    DiscreteMeasure::new(atoms, m.weights.clone())
}
