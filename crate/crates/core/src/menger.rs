//! Menger curvature of point triples and of discrete measures, and the
//! potential U_mu = M mu + c_mu that feeds the curvature capacity engine.
//!
//! The triple sum is O(n^3) in the atom count; the kernel blocks the inner
//! loops for cache locality and parallelizes over the outer index with a
//! fixed reduction order, so results are reproducible at any thread count.

use rayon::prelude::*;

use crate::error::Error;
use crate::measures::{
    maximal_function_resolved, DiscreteMeasure, PotentialValue, RESOLUTION_STANDOFF,
};
use crate::real::{Cplx, Real};
use crate::Result;

/// Default atom cap for O(n^3) aggregates.
pub const DEFAULT_ATOM_CAP: usize = 1200;

/// Default inner-loop block size of the triple-sum kernel.
pub const DEFAULT_BLOCK: usize = 64;

/// Menger curvature 1/R(x, y, z) via c = 4 Area / (|x-y| |y-z| |z-x|).
/// Collinear triples, including repeated points, return 0. Near-collinear
/// triples with 4 Area below 1e-14 times the side-length product are snapped
/// to 0 to avoid cancellation blow-up. The triple is put in a canonical
/// order first, so all 6 permutations return the identical value.
pub fn menger_curvature<T: Real>(x: Cplx<T>, y: Cplx<T>, z: Cplx<T>) -> T {
    let mut p = [x, y, z];
    p.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let [x, y, z] = p;
    let ab = (x - y).norm();
    let bc = (y - z).norm();
    let ca = (z - x).norm();
    let prod = ab * bc * ca;
    if prod == T::zero() {
        return T::zero();
    }
    let u = y - x;
    let v = z - x;
    let cross = (u.re * v.im - u.im * v.re).abs();
    let four_area = T::of(2.0) * cross;
    if four_area < T::of(1e-14) * prod {
        return T::zero();
    }
    four_area / prod
}

fn energy_at<T: Real>(atoms: &[Cplx<T>], weights: &[T], x: Cplx<T>, block: usize) -> T {
    let n = atoms.len();
    let block = block.max(1);
    let mut total = T::zero();
    let mut by = 0;
    while by < n {
        let yend = (by + block).min(n);
        let mut bz = 0;
        while bz < n {
            let zend = (bz + block).min(n);
            let mut partial = T::zero();
            for iy in by..yend {
                let y = atoms[iy];
                let wy = weights[iy];
                for iz in bz..zend {
                    let c = menger_curvature(x, y, atoms[iz]);
                    partial += wy * weights[iz] * (c * c);
                }
            }
            total += partial;
            bz = zend;
        }
        by = yend;
    }
    total
}

/// Curvature energy c_mu(x)^2 = sum_y sum_z w_y w_z c(x, y, z)^2.
pub fn curvature_energy<T: Real>(m: &DiscreteMeasure<T>, x: Cplx<T>) -> T {
    energy_at(m.atoms(), m.weights(), x, DEFAULT_BLOCK)
}

/// Per-atom curvature energies, computed in parallel over the outer index
/// with the given inner block size.
pub fn per_atom_energies_block<T: Real>(m: &DiscreteMeasure<T>, block: usize) -> Vec<T> {
    let atoms = m.atoms();
    let weights = m.weights();
    (0..atoms.len())
        .into_par_iter()
        .map(|i| energy_at(atoms, weights, atoms[i], block))
        .collect()
}

/// Per-atom curvature energies with the default block size.
pub fn per_atom_energies<T: Real>(m: &DiscreteMeasure<T>) -> Vec<T> {
    per_atom_energies_block(m, DEFAULT_BLOCK)
}

/// Total curvature c^2(mu) = sum_x w_x c_mu(x)^2 with the default atom cap.
pub fn total_curvature<T: Real>(m: &DiscreteMeasure<T>) -> Result<T> {
    total_curvature_with_cap(m, DEFAULT_ATOM_CAP)
}

/// Total curvature with an explicit O(n^3) cap.
pub fn total_curvature_with_cap<T: Real>(m: &DiscreteMeasure<T>, cap: usize) -> Result<T> {
    if m.len() > cap {
        return Err(Error::AtomCapExceeded { n: m.len(), cap });
    }
    let energies = per_atom_energies(m);
    let mut total = T::zero();
    for (w, e) in m.weights().iter().zip(&energies) {
        total += *w * *e;
    }
    Ok(total)
}

/// Tolsa potential U_mu(x) = M mu(x) + c_mu(x). Infinite exactly when an atom
/// sits at x. The maximal term is evaluated at resolved radii (see
/// [`crate::measures::maximal_function_resolved`]): the potential certifies
/// the density the atoms discretize, not their sub-resolution spikes.
pub fn potential_at<T: Real>(m: &DiscreteMeasure<T>, x: Cplx<T>) -> PotentialValue<T> {
    match maximal_function_resolved(m, x, T::of(RESOLUTION_STANDOFF)) {
        PotentialValue::Infinite => PotentialValue::Infinite,
        PotentialValue::Finite(mf) => {
            PotentialValue::Finite(mf + curvature_energy(m, x).sqrt())
        }
    }
}

/// Curvature report: per-atom energies, the mass-weighted total, and the
/// potential U_mu over a query grid.
#[derive(Clone, Debug)]
pub struct CurvatureReport<T: Real> {
    pub per_atom_energy: Vec<T>,
    pub total: T,
    pub query_potentials: Vec<PotentialValue<T>>,
    pub max_potential: PotentialValue<T>,
}

/// Full curvature report for a measure over a query grid, subject to the
/// O(n^3) cap.
pub fn tolsa_potential<T: Real>(
    m: &DiscreteMeasure<T>,
    query: &[Cplx<T>],
    cap: usize,
) -> Result<CurvatureReport<T>> {
    tolsa_potential_block(m, query, cap, DEFAULT_BLOCK)
}

/// [`tolsa_potential`] with an explicit kernel block size.
pub fn tolsa_potential_block<T: Real>(
    m: &DiscreteMeasure<T>,
    query: &[Cplx<T>],
    cap: usize,
    block: usize,
) -> Result<CurvatureReport<T>> {
    if query.is_empty() {
        return Err(Error::EmptyInput("empty query grid".into()));
    }
    if m.len() > cap {
        return Err(Error::AtomCapExceeded { n: m.len(), cap });
    }
    let per_atom_energy = per_atom_energies_block(m, block);
    let mut total = T::zero();
    for (w, e) in m.weights().iter().zip(&per_atom_energy) {
        total += *w * *e;
    }
    let query_potentials: Vec<PotentialValue<T>> = query
        .par_iter()
        .map(|&q| potential_at(m, q))
        .collect();
    let max_potential = query_potentials
        .iter()
        .copied()
        .fold(PotentialValue::Finite(T::zero()), PotentialValue::max);
    Ok(CurvatureReport { per_atom_energy, total, query_potentials, max_potential })
}
