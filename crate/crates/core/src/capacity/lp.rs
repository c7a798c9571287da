//! Lower bounds for gamma from the extremal problem itself: maximize
//! Re f'(infinity) over finite pole expansions f = sum a_{k,p} (z - w_k)^(-p)
//! subject to |f| <= 1 on the boundary.
//!
//! The modulus constraints are handled by an exchange / cutting-plane scheme:
//! solve a small LP on the working constraint set, locate the worst modulus
//! violations on a refined boundary scan (including a between-sample spike
//! search), add the supporting half-planes Re(e^{-i arg f(z)} f(z)) <= 1 at
//! the violators, drop slack constraints, and repeat. The final value is
//! divided by (1 + violation) from the a-posteriori max-modulus check, which
//! the certificate records.

use rayon::prelude::*;

use crate::capacity::estimate::{BoundKind, CapacityEstimate, Certificate};
use crate::error::Error;
use crate::real::{Cplx, Real};
use crate::sample::{boundary_sample, dist_to_set, rough_diameter, BoundarySamples};
use crate::sets::SetSpec;
use crate::Result;

/// Parameters of the LP engine.
#[derive(Clone, Debug)]
pub struct LpParams<T: Real> {
    /// Highest pole order in the expansion.
    pub degree: usize,
    /// Boundary sample size for the working constraints; the a-posteriori
    /// check runs on a 4x refinement.
    pub boundary_n: usize,
    /// Outer exchange iterations.
    pub max_outer: usize,
    /// Stop when the scan violation drops below this.
    pub violation_tol: T,
    /// Bound on the normalized coefficient components, a guard against
    /// ill-posed pole placements.
    pub coeff_box: T,
    /// Number of boundary points constrained in the first round.
    pub initial_points: usize,
    /// Cuts added per exchange round.
    pub cuts_per_round: usize,
}

impl<T: Real> LpParams<T> {
    pub fn new(degree: usize, boundary_n: usize) -> Self {
        LpParams {
            degree,
            boundary_n,
            max_outer: 40,
            violation_tol: T::of(1e-4),
            coeff_box: T::of(64.0),
            initial_points: 96,
            cuts_per_round: 16,
        }
    }
}

struct Basis<T: Real> {
    poles: Vec<Cplx<T>>,
    scales: Vec<T>,
    degree: usize,
}

impl<T: Real> Basis<T> {
    fn n_coeff(&self) -> usize {
        self.poles.len() * self.degree
    }

    /// Basis values (rho_k / (z - w_k))^p ordered pole-major.
    fn eval(&self, z: Cplx<T>) -> Vec<Cplx<T>> {
        let mut out = Vec::with_capacity(self.n_coeff());
        for (w, rho) in self.poles.iter().zip(&self.scales) {
            let base = Cplx::new(*rho, T::zero()) / (z - w);
            let mut pw = base;
            for _ in 0..self.degree {
                out.push(pw);
                pw = pw * base;
            }
        }
        out
    }

    /// f(z) for real coefficient vector [u_1, v_1, u_2, v_2, ...].
    fn f(&self, coeffs: &[T], z: Cplx<T>) -> Cplx<T> {
        let basis = self.eval(z);
        let mut acc = Cplx::new(T::zero(), T::zero());
        for (j, b) in basis.iter().enumerate() {
            let a = Cplx::new(coeffs[2 * j], coeffs[2 * j + 1]);
            acc += a * b;
        }
        acc
    }
}

/// Dense-tableau simplex for: maximize c.x subject to A x <= b, x free,
/// b >= 0 (so the all-slack basis is feasible). Free variables are split
/// into positive and negative parts.
fn simplex_max<T: Real>(
    rows: &[Vec<T>],
    rhs: &[T],
    obj: &[T],
    max_iters: usize,
) -> Result<(Vec<T>, T)> {
    let m = rows.len();
    let n = obj.len();
    let cols = 2 * n + m;
    let mut tab = vec![vec![T::zero(); cols + 1]; m + 1];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            tab[i][j] = row[j];
            tab[i][n + j] = -row[j];
        }
        tab[i][2 * n + i] = T::one();
        tab[i][cols] = rhs[i];
    }
    for j in 0..n {
        tab[m][j] = obj[j];
        tab[m][n + j] = -obj[j];
    }
    let mut basis: Vec<usize> = (2 * n..2 * n + m).collect();

    let eps = T::of(1e-9);
    let mut bland = false;
    let mut degenerate_run = 0usize;
    for iter in 0..max_iters {
        // Entering column.
        let mut enter = usize::MAX;
        if bland {
            for j in 0..cols {
                if tab[m][j] > eps {
                    enter = j;
                    break;
                }
            }
        } else {
            let mut best = eps;
            for j in 0..cols {
                if tab[m][j] > best {
                    best = tab[m][j];
                    enter = j;
                }
            }
        }
        if enter == usize::MAX {
            // Optimal.
            let mut x = vec![T::zero(); n];
            for (i, &bj) in basis.iter().enumerate() {
                if bj < n {
                    x[bj] += tab[i][cols];
                } else if bj < 2 * n {
                    x[bj - n] -= tab[i][cols];
                }
            }
            return Ok((x, -tab[m][cols]));
        }
        // Ratio test.
        let mut leave = usize::MAX;
        let mut best_ratio = T::infinity();
        for i in 0..m {
            if tab[i][enter] > eps {
                let ratio = tab[i][cols] / tab[i][enter];
                if ratio < best_ratio - eps || (ratio < best_ratio + eps && leave == usize::MAX) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if leave == usize::MAX {
            return Err(Error::LpFailure(format!(
                "unbounded direction at iteration {iter}; the constraint set does not cap the objective"
            )));
        }
        if best_ratio <= eps {
            degenerate_run += 1;
            if degenerate_run > 3 * m {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
        // Pivot.
        let piv = tab[leave][enter];
        for j in 0..=cols {
            tab[leave][j] /= piv;
        }
        for i in 0..=m {
            if i != leave {
                let factor = tab[i][enter];
                if factor != T::zero() {
                    for j in 0..=cols {
                        let delta = factor * tab[leave][j];
                        tab[i][j] -= delta;
                    }
                }
            }
        }
        basis[leave] = enter;
    }
    Err(Error::LpFailure(format!(
        "simplex iteration cap {max_iters} reached without optimality"
    )))
}

#[derive(Clone, Debug)]
struct Cut<T: Real> {
    point: Cplx<T>,
    angle: T,
}

fn cut_row<T: Real>(basis: &Basis<T>, cut: &Cut<T>) -> Vec<T> {
    let rot = Cplx::from_polar(T::one(), -cut.angle);
    let values = basis.eval(cut.point);
    let mut row = Vec::with_capacity(2 * values.len());
    for b in values {
        let rb = rot * b;
        row.push(rb.re);
        row.push(-rb.im);
    }
    row
}

/// Max |f| over points of a scanned boundary plus a golden-section search on
/// every between-sample gap. The search stops at `clearance` from any pole;
/// closer spikes are not certified, and the clearance is recorded in the
/// certificate. Returns (max value, attaining point).
fn max_modulus<T: Real>(
    basis: &Basis<T>,
    coeffs: &[T],
    scan: &BoundarySamples<T>,
    clearance: T,
) -> (T, Cplx<T>) {
    let eval = |z: Cplx<T>| -> T {
        let mut near_pole = false;
        for w in &basis.poles {
            if (z - w).norm() < clearance {
                near_pole = true;
                break;
            }
        }
        if near_pole {
            T::zero()
        } else {
            basis.f(coeffs, z).norm()
        }
    };

    let mut gaps: Vec<(Cplx<T>, Cplx<T>)> = Vec::new();
    for comp in &scan.components {
        let n = comp.points.len();
        if n >= 2 {
            for i in 0..n - 1 {
                gaps.push((comp.points[i], comp.points[i + 1]));
            }
            if comp.closed {
                gaps.push((comp.points[n - 1], comp.points[0]));
            }
        }
    }

    let golden = T::of(0.6180339887498949);
    let candidates: Vec<(T, Cplx<T>)> = gaps
        .par_iter()
        .map(|&(a, b)| {
            let mut best_v = eval(a).max(eval(b));
            let mut best_z = a;
            // Coarse interior probe then golden-section refinement around
            // the best sample; gaps are short so |f| is near-unimodal.
            let probes = 6;
            let mut tbest = T::zero();
            for k in 1..probes {
                let t = T::of(k as f64 / probes as f64);
                let z = a + (b - a) * t;
                let v = eval(z);
                if v > best_v {
                    best_v = v;
                    best_z = z;
                    tbest = t;
                }
            }
            let mut lo = (tbest - T::of(1.0 / probes as f64)).max(T::zero());
            let mut hi = (tbest + T::of(1.0 / probes as f64)).min(T::one());
            for _ in 0..32 {
                let m1 = hi - (hi - lo) * golden;
                let m2 = lo + (hi - lo) * golden;
                let v1 = eval(a + (b - a) * m1);
                let v2 = eval(a + (b - a) * m2);
                if v1 >= v2 {
                    hi = m2;
                    if v1 > best_v {
                        best_v = v1;
                        best_z = a + (b - a) * m1;
                    }
                } else {
                    lo = m1;
                    if v2 > best_v {
                        best_v = v2;
                        best_z = a + (b - a) * m2;
                    }
                }
            }
            (best_v, best_z)
        })
        .collect();

    let mut best = (T::zero(), Cplx::new(T::zero(), T::zero()));
    for (v, z) in candidates {
        if v > best.0 {
            best = (v, z);
        }
    }
    for comp in &scan.components {
        for &p in &comp.points {
            let v = eval(p);
            if v > best.0 {
                best = (v, p);
            }
        }
    }
    best
}

/// Lower bound for gamma from the pole-expansion LP.
pub fn lp_lower_bound<T: Real>(
    s: &SetSpec<T>,
    poles: &[Cplx<T>],
    params: &LpParams<T>,
) -> Result<CapacityEstimate<T>> {
    if poles.is_empty() {
        return Err(Error::InfeasiblePole("no poles given".into()));
    }
    if params.degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let diam = rough_diameter(s)?.max(T::of(1e-12));

    // Poles must lie in the set (distance check) and apart from each other.
    for (i, w) in poles.iter().enumerate() {
        let d = dist_to_set(s, *w, 1024)?;
        if d > T::of(1e-7) * diam {
            return Err(Error::InfeasiblePole(format!(
                "pole {i} at ({}, {}) is at distance {} from the set",
                w.re.as_f64(),
                w.im.as_f64(),
                d.as_f64()
            )));
        }
        for (j, w2) in poles.iter().enumerate().skip(i + 1) {
            if (*w - *w2).norm() < T::of(1e-12) * diam {
                return Err(Error::InfeasiblePole(format!("poles {i} and {j} coincide")));
            }
        }
    }

    let coarse = boundary_sample(s, params.boundary_n)?;
    let scan = boundary_sample(s, 4 * params.boundary_n)?;
    let coarse_points = coarse.all_points();

    // Per-pole scale: distance to the nearest coarse boundary point, so all
    // basis columns have modulus at most ~1 on the constraint set.
    let mut scales = Vec::with_capacity(poles.len());
    for w in poles {
        let mut d = T::infinity();
        for p in &coarse_points {
            d = d.min((*p - *w).norm());
        }
        if d < T::of(1e-13) * diam {
            return Err(Error::InfeasiblePole(
                "a pole coincides with a boundary sample point".into(),
            ));
        }
        scales.push(d);
    }
    let basis = Basis { poles: poles.to_vec(), scales, degree: params.degree };
    let n_coeff = basis.n_coeff();
    let n_vars = 2 * n_coeff;
    let clearance = basis
        .scales
        .iter()
        .fold(T::infinity(), |a, &b| a.min(b))
        * T::of(1e-6);

    // Objective: Re f'(infinity) = sum_k rho_k * u_{k,1}.
    let mut obj = vec![T::zero(); n_vars];
    for k in 0..poles.len() {
        obj[2 * (k * params.degree)] = basis.scales[k];
    }

    // Initial cuts: a spread of boundary points with four half-plane angles.
    let mut cuts: Vec<Cut<T>> = Vec::new();
    let stride = (coarse_points.len() / params.initial_points.max(1)).max(1);
    for p in coarse_points.iter().step_by(stride) {
        for a in 0..4 {
            cuts.push(Cut {
                point: *p,
                angle: T::of(a as f64) * T::FRAC_PI_2(),
            });
        }
    }

    let mut coeffs = vec![T::zero(); n_vars];
    let mut objective = T::zero();
    let mut outer_used = 0usize;
    let mut converged = false;
    for outer in 0..params.max_outer {
        outer_used = outer + 1;
        // Box rows first, then the working cuts.
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(2 * n_vars + cuts.len());
        let mut rhs: Vec<T> = Vec::with_capacity(2 * n_vars + cuts.len());
        for j in 0..n_vars {
            let mut r = vec![T::zero(); n_vars];
            r[j] = T::one();
            rows.push(r);
            rhs.push(params.coeff_box);
            let mut r = vec![T::zero(); n_vars];
            r[j] = -T::one();
            rows.push(r);
            rhs.push(params.coeff_box);
        }
        for cut in &cuts {
            let mut row = cut_row(&basis, cut);
            // Normalize large rows to keep the tableau well scaled.
            let mut mx = T::zero();
            for v in &row {
                mx = mx.max(v.abs());
            }
            let mut b = T::one();
            if mx > T::one() {
                for v in &mut row {
                    *v /= mx;
                }
                b = b / mx;
            }
            rows.push(row);
            rhs.push(b);
        }
        let (x, value) = simplex_max(&rows, &rhs, &obj, 200 * (rows.len() + n_vars))?;
        coeffs = x;
        objective = value;

        let (vmax, at) = max_modulus(&basis, &coeffs, &scan, clearance);
        if vmax <= T::one() + params.violation_tol {
            converged = true;
            break;
        }

        // Exchange: drop comfortably slack cuts, add supporting half-planes
        // at the worst violations.
        let keep_tol = T::of(0.05);
        cuts.retain(|cut| {
            let fv = basis.f(&coeffs, cut.point);
            let rot = Cplx::from_polar(T::one(), -cut.angle);
            (rot * fv).re >= T::one() - keep_tol
        });

        let mut scored: Vec<(T, Cplx<T>)> = scan
            .all_points()
            .par_iter()
            .map(|&z| (basis.f(&coeffs, z).norm(), z))
            .collect();
        scored.push((vmax, at));
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut added = 0;
        for (v, z) in scored {
            if v <= T::one() + params.violation_tol || added >= params.cuts_per_round {
                break;
            }
            let fv = basis.f(&coeffs, z);
            let angle = fv.im.atan2(fv.re);
            cuts.push(Cut { point: z, angle });
            added += 1;
        }
        if added == 0 {
            converged = true;
            break;
        }
    }

    // A-posteriori certification on the refined scan with spike search.
    let (vmax, _) = max_modulus(&basis, &coeffs, &scan, clearance);
    let violation = (vmax - T::one()).max(T::zero());
    let value = objective / (T::one() + violation);

    let box_active = coeffs
        .iter()
        .any(|v| v.abs() >= params.coeff_box - T::of(1e-6));

    let mut est = CapacityEstimate {
        value,
        kind: BoundKind::LowerBound,
        method: "lp-pole-expansion".to_string(),
        params: Default::default(),
        certificate: Some(Certificate::MaxModulus {
            max_abs_raw: vmax,
            max_abs_final: vmax / (T::one() + violation),
            checked_points: scan.len(),
            spike_search: true,
            pole_clearance: clearance,
        }),
    };
    est.params.insert("degree".into(), params.degree.to_string());
    est.params.insert("poles".into(), poles.len().to_string());
    est.params.insert("boundary_n".into(), params.boundary_n.to_string());
    est.params.insert("outer_iterations".into(), outer_used.to_string());
    est.params.insert("converged".into(), converged.to_string());
    if box_active {
        est.params.insert(
            "note".into(),
            "coefficient box active: pole basis cannot certify more".into(),
        );
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cplx;

    #[test]
    fn simplex_solves_small_lp() {
        // max x + 2y s.t. x + y <= 4, x <= 3, y <= 3 -> (1, 3), value 7.
        let rows: Vec<Vec<f64>> = vec![
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ];
        let rhs = vec![4.0, 3.0, 3.0];
        let obj = vec![1.0, 2.0];
        let (x, v) = simplex_max(&rows, &rhs, &obj, 1000).unwrap();
        assert!((v - 7.0).abs() < 1e-9, "objective {v}");
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn simplex_handles_free_negative_solution() {
        // max -x s.t. -x <= 5, x <= 10 -> x = -5, value 5.
        let rows: Vec<Vec<f64>> = vec![vec![-1.0], vec![1.0]];
        let rhs = vec![5.0, 10.0];
        let obj = vec![-1.0];
        let (x, v) = simplex_max(&rows, &rhs, &obj, 100).unwrap();
        assert!((x[0] + 5.0).abs() < 1e-9);
        assert!((v - 5.0).abs() < 1e-9);
    }

    #[test]
    fn unit_disk_reaches_one() {
        let s = SetSpec::disk(cplx::<f64>(0.0, 0.0), 1.0).unwrap();
        let e = lp_lower_bound(&s, &[cplx(0.0, 0.0)], &LpParams::new(1, 512)).unwrap();
        assert!(e.value >= 0.999, "disk LP value {}", e.value);
        assert!(e.value <= 1.0 + 1e-6, "lower bound exceeds the exact value: {}", e.value);
        match e.certificate {
            Some(Certificate::MaxModulus { max_abs_final, .. }) => {
                assert!(max_abs_final <= 1.001);
            }
            other => panic!("expected max-modulus certificate, got {other:?}"),
        }
    }

    #[test]
    fn two_far_disks_approach_additivity() {
        let s = SetSpec::union(vec![
            SetSpec::disk(cplx::<f64>(-50.0, 0.0), 1.0).unwrap(),
            SetSpec::disk(cplx::<f64>(50.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let e = lp_lower_bound(
            &s,
            &[cplx(-50.0, 0.0), cplx(50.0, 0.0)],
            &LpParams::new(1, 1024),
        )
        .unwrap();
        assert!(e.value >= 1.9, "two-disk LP value {}", e.value);
        assert!(e.value <= 2.0 + 1e-6);
    }

    #[test]
    fn disk_with_offcenter_pole_stays_below_radius() {
        let s = SetSpec::disk(cplx::<f64>(0.0, 0.0), 2.0).unwrap();
        let e = lp_lower_bound(&s, &[cplx(0.5, 0.25)], &LpParams::new(3, 512)).unwrap();
        assert!(e.value <= 2.0 + 1e-6, "lower bound must respect gamma = 2: {}", e.value);
        assert!(e.value >= 1.8, "off-center pole with degree 3 should get close: {}", e.value);
    }

    #[test]
    fn segment_bound_is_sound() {
        // Poles on a slit cannot stay bounded nearby, so the certified value
        // collapses toward zero; soundness (never exceeding gamma = 0.25)
        // is what this test pins down.
        let s = SetSpec::segment(cplx::<f64>(0.0, 0.0), cplx(1.0, 0.0)).unwrap();
        let poles: Vec<Cplx<f64>> = (0..8).map(|k| cplx((k as f64 + 0.5) / 8.0, 0.0)).collect();
        let mut params = LpParams::new(8, 2000);
        params.max_outer = 12;
        let e = lp_lower_bound(&s, &poles, &params).unwrap();
        assert!(e.value <= 0.25 + 1e-6, "segment LP value {} exceeds gamma", e.value);
        assert!(e.value >= 0.0);
    }

    #[test]
    fn infeasible_pole_is_rejected() {
        let s = SetSpec::disk(cplx::<f64>(0.0, 0.0), 1.0).unwrap();
        match lp_lower_bound(&s, &[cplx(5.0, 0.0)], &LpParams::new(1, 128)) {
            Err(Error::InfeasiblePole(_)) => {}
            other => panic!("expected infeasible pole, got {other:?}"),
        }
    }

    #[test]
    fn lp_covariance_under_similarity() {
        let s1 = SetSpec::disk(cplx::<f64>(0.0, 0.0), 1.0).unwrap();
        let s2 = SetSpec::disk(cplx::<f64>(3.0, -2.0), 2.5).unwrap();
        let e1 = lp_lower_bound(&s1, &[cplx(0.0, 0.0)], &LpParams::new(1, 256)).unwrap();
        let e2 = lp_lower_bound(&s2, &[cplx(3.0, -2.0)], &LpParams::new(1, 256)).unwrap();
        assert!(
            (e2.value - 2.5 * e1.value).abs() <= 1e-6 * e2.value.abs(),
            "{} vs {}",
            e2.value,
            2.5 * e1.value
        );
    }
}
