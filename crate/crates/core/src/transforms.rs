//! Discrete Cauchy transform and Vitushkin localization on grid functions.
//! These are verification instruments for the localization identities; the
//! capacity engines do not depend on them.
//!
//! The Cauchy convolution treats each cell as an atom of mass value * h^2 and
//! skips the self-cell (the principal-value convention); all claims are at
//! O(h) accuracy and the tests pin them at that order.

use rayon::prelude::*;

use crate::error::Error;
use crate::measures::DiscreteMeasure;
use crate::real::{Cplx, Real};
use crate::Result;

/// Complex-valued function sampled on a uniform grid, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T: Real> {
    pub origin: Cplx<T>,
    pub h: T,
    pub width: usize,
    pub height: usize,
    pub values: Vec<Cplx<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(
        origin: Cplx<T>,
        h: T,
        width: usize,
        height: usize,
        values: Vec<Cplx<T>>,
    ) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(Error::InvalidArgument("grid spacing must be positive".into()));
        }
        if width < 2 || height < 2 {
            return Err(Error::InvalidArgument("grid dimensions must be at least 2".into()));
        }
        if values.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "value count {} does not match {}x{}",
                values.len(),
                width,
                height
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("grid values must be finite".into()));
        }
        Ok(GridFunction { origin, h, width, height, values })
    }

    pub fn from_fn(
        origin: Cplx<T>,
        h: T,
        width: usize,
        height: usize,
        f: impl Fn(Cplx<T>) -> Cplx<T>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                values.push(f(origin + Cplx::new(T::of(j as f64) * h, T::of(i as f64) * h)));
            }
        }
        Self::new(origin, h, width, height, values)
    }

    pub fn point(&self, i: usize, j: usize) -> Cplx<T> {
        self.origin + Cplx::new(T::of(j as f64) * self.h, T::of(i as f64) * self.h)
    }

    pub fn at(&self, i: usize, j: usize) -> Cplx<T> {
        self.values[i * self.width + j]
    }

    fn same_geometry(&self, other: &Self) -> bool {
        self.origin == other.origin
            && self.h == other.h
            && self.width == other.width
            && self.height == other.height
    }

    /// Indices of interior cells (one-cell margin).
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (w, h) = (self.width, self.height);
        (1..h - 1).flat_map(move |i| (1..w - 1).map(move |j| (i, j)))
    }

    /// Maximum modulus over interior cells of the difference with `other`.
    pub fn max_interior_diff(&self, other: &Self) -> Result<T> {
        if !self.same_geometry(other) {
            return Err(Error::IncompatibleGrids("geometry mismatch".into()));
        }
        let mut best = T::zero();
        for (i, j) in self.interior() {
            let d = (self.at(i, j) - other.at(i, j)).norm();
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }
}

/// Discrete Cauchy transform of a measure at a point off the atoms.
pub fn cauchy_transform_measure<T: Real>(
    m: &DiscreteMeasure<T>,
    z: Cplx<T>,
) -> Result<Cplx<T>> {
    let mut acc = Cplx::new(T::zero(), T::zero());
    for (a, w) in m.atoms().iter().zip(m.weights()) {
        let d = *a - z;
        if d.norm() < T::of(1e-12) {
            return Err(Error::PointAtAtom { re: a.re.as_f64(), im: a.im.as_f64() });
        }
        acc += Cplx::new(*w, T::zero()) / d;
    }
    Ok(acc)
}

/// Centered-difference d-bar operator (d/dx + i d/dy)/2 on interior cells;
/// boundary cells are zeroed and only the interior is meaningful.
pub fn dbar<T: Real>(g: &GridFunction<T>) -> GridFunction<T> {
    let mut values = vec![Cplx::new(T::zero(), T::zero()); g.values.len()];
    let two_h = T::of(2.0) * g.h;
    for i in 1..g.height - 1 {
        for j in 1..g.width - 1 {
            let dx = (g.at(i, j + 1) - g.at(i, j - 1)) / two_h;
            let dy = (g.at(i + 1, j) - g.at(i - 1, j)) / two_h;
            values[i * g.width + j] = (dx + Cplx::<T>::i() * dy) / T::of(2.0);
        }
    }
    GridFunction { origin: g.origin, h: g.h, width: g.width, height: g.height, values }
}

fn smooth_ramp<T: Real>(t: T) -> T {
    // 0 below -1/2, 1 above 1/2, cubic smoothstep in between.
    let half = T::of(0.5);
    if t <= -half {
        T::zero()
    } else if t >= half {
        T::one()
    } else {
        let s = t + half;
        s * s * (T::of(3.0) - T::of(2.0) * s)
    }
}

/// Partition of unity subordinate to a grid of squares of side `cell` over
/// the grid's bounding box: tensor smoothstep bumps with supports in the
/// doubled squares, summing identically to 1 on the box.
pub fn partition_of_unity<T: Real>(
    template: &GridFunction<T>,
    cell: T,
) -> Result<Vec<GridFunction<T>>> {
    if !(cell > T::zero()) {
        return Err(Error::InvalidArgument("cell side must be positive".into()));
    }
    let span_x = T::of((template.width - 1) as f64) * template.h;
    let span_y = T::of((template.height - 1) as f64) * template.h;
    let nx = (span_x / cell).ceil().as_f64() as usize;
    let ny = (span_y / cell).ceil().as_f64() as usize;
    let nx = nx.max(1);
    let ny = ny.max(1);

    // 1D factors: psi_k = R_k - R_{k+1} with R_0 = 1, R_n = 0 and interior
    // ramps at the cell edges; the telescoping sum is identically 1.
    let factor = |k: usize, n: usize, coord: T, origin: T| -> T {
        let left = if k == 0 {
            T::one()
        } else {
            smooth_ramp((coord - (origin + T::of(k as f64) * cell)) / cell)
        };
        let right = if k + 1 == n {
            T::zero()
        } else {
            smooth_ramp((coord - (origin + T::of((k + 1) as f64) * cell)) / cell)
        };
        left - right
    };

    let mut bumps = Vec::with_capacity(nx * ny);
    for cy in 0..ny {
        for cx in 0..nx {
            let mut values = Vec::with_capacity(template.values.len());
            for i in 0..template.height {
                for j in 0..template.width {
                    let p = template.point(i, j);
                    let fx = factor(cx, nx, p.re, template.origin.re);
                    let fy = factor(cy, ny, p.im, template.origin.im);
                    values.push(Cplx::new(fx * fy, T::zero()));
                }
            }
            bumps.push(GridFunction {
                origin: template.origin,
                h: template.h,
                width: template.width,
                height: template.height,
                values,
            });
        }
    }
    Ok(bumps)
}

/// Discrete Cauchy convolution: out(z_i) = sum_{j != i} g(z_j) h^2 / (z_j -
/// z_i), skipping the self-cell. Zero cells are skipped, which makes
/// localized integrands cheap.
pub fn cauchy_convolution<T: Real>(g: &GridFunction<T>) -> GridFunction<T> {
    let support: Vec<(usize, Cplx<T>, Cplx<T>)> = g
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != T::zero() || v.im != T::zero())
        .map(|(idx, v)| {
            let i = idx / g.width;
            let j = idx % g.width;
            (idx, g.point(i, j), *v)
        })
        .collect();
    let h2 = g.h * g.h;
    let values: Vec<Cplx<T>> = (0..g.values.len())
        .into_par_iter()
        .map(|idx| {
            let i = idx / g.width;
            let j = idx % g.width;
            let z = g.point(i, j);
            let mut acc = Cplx::new(T::zero(), T::zero());
            for (sidx, sz, sv) in &support {
                if *sidx == idx {
                    continue;
                }
                acc += *sv / (*sz - z);
            }
            acc * h2
        })
        .collect();
    GridFunction { origin: g.origin, h: g.h, width: g.width, height: g.height, values }
}

fn pointwise<T: Real>(
    a: &GridFunction<T>,
    b: &GridFunction<T>,
    f: impl Fn(Cplx<T>, Cplx<T>) -> Cplx<T>,
) -> GridFunction<T> {
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| f(x, y))
        .collect();
    GridFunction { origin: a.origin, h: a.h, width: a.width, height: a.height, values }
}

/// Vitushkin localization V_phi f = phi f + (1/pi) C(f dbar phi).
pub fn vitushkin_localize<T: Real>(
    f: &GridFunction<T>,
    phi: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    if !f.same_geometry(phi) {
        return Err(Error::IncompatibleGrids("f and phi disagree".into()));
    }
    let dphi = dbar(phi);
    let integrand = pointwise(f, &dphi, |x, y| x * y);
    let conv = cauchy_convolution(&integrand);
    let phif = pointwise(f, phi, |x, y| x * y);
    Ok(pointwise(&phif, &conv, |x, y| x + y / T::PI()))
}

/// Alternate form V_phi f = -(1/pi) C(phi dbar f).
pub fn vitushkin_localize_alt<T: Real>(
    f: &GridFunction<T>,
    phi: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    if !f.same_geometry(phi) {
        return Err(Error::IncompatibleGrids("f and phi disagree".into()));
    }
    let df = dbar(f);
    let integrand = pointwise(phi, &df, |x, y| x * y);
    let conv = cauchy_convolution(&integrand);
    let zero = GridFunction {
        origin: f.origin,
        h: f.h,
        width: f.width,
        height: f.height,
        values: vec![Cplx::new(T::zero(), T::zero()); f.values.len()],
    };
    Ok(pointwise(&zero, &conv, |_, y| -y / T::PI()))
}

/// Both localization formulas and their maximal interior difference.
pub fn vitushkin_pair<T: Real>(
    f: &GridFunction<T>,
    phi: &GridFunction<T>,
) -> Result<(GridFunction<T>, GridFunction<T>, T)> {
    let primary = vitushkin_localize(f, phi)?;
    let alternate = vitushkin_localize_alt(f, phi)?;
    let diff = primary.max_interior_diff(&alternate)?;
    Ok((primary, alternate, diff))
}

/// Interior weak pairing sum a * b * h^2.
pub fn weak_pairing<T: Real>(a: &GridFunction<T>, b: &GridFunction<T>) -> Result<Cplx<T>> {
    if !a.same_geometry(b) {
        return Err(Error::IncompatibleGrids("pairing grids disagree".into()));
    }
    let mut acc = Cplx::new(T::zero(), T::zero());
    for (i, j) in a.interior() {
        acc += a.at(i, j) * b.at(i, j);
    }
    Ok(acc * (a.h * a.h))
}

impl GridFunction<f64> {
    /// Writes the grid as flat binary: origin (2 f64), h (f64), width and
    /// height (u64), then re/im pairs, all little-endian.
    pub fn write_binary(&self, path: &std::path::Path) -> Result<()> {
        use std::io::Write;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        out.write_all(&self.origin.re.to_le_bytes())?;
        out.write_all(&self.origin.im.to_le_bytes())?;
        out.write_all(&self.h.to_le_bytes())?;
        out.write_all(&(self.width as u64).to_le_bytes())?;
        out.write_all(&(self.height as u64).to_le_bytes())?;
        for v in &self.values {
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a grid written by [`GridFunction::write_binary`].
    pub fn read_binary(path: &std::path::Path) -> Result<Self> {
        use std::io::Read;
        let mut data = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut data)?;

        struct Cursor<'a> {
            data: &'a [u8],
            off: usize,
        }
        impl<'a> Cursor<'a> {
            fn bytes(&mut self) -> Result<[u8; 8]> {
                let end = self.off + 8;
                if end > self.data.len() {
                    return Err(Error::InvalidArgument("truncated grid file".into()));
                }
                let out: [u8; 8] = self.data[self.off..end].try_into().unwrap();
                self.off = end;
                Ok(out)
            }
            fn f64(&mut self) -> Result<f64> {
                Ok(f64::from_le_bytes(self.bytes()?))
            }
            fn u64(&mut self) -> Result<u64> {
                Ok(u64::from_le_bytes(self.bytes()?))
            }
        }

        let mut cur = Cursor { data: &data, off: 0 };
        let origin = Cplx::new(cur.f64()?, cur.f64()?);
        let h = cur.f64()?;
        let width = cur.u64()? as usize;
        let height = cur.u64()? as usize;
        if width.checked_mul(height).is_none() || width * height > 1 << 28 {
            return Err(Error::InvalidArgument("unreasonable grid dimensions".into()));
        }
        let mut values = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            let re = cur.f64()?;
            let im = cur.f64()?;
            values.push(Cplx::new(re, im));
        }
        GridFunction::new(origin, h, width, height, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cplx;

    fn grid(h: f64, n: usize, f: impl Fn(Cplx<f64>) -> Cplx<f64>) -> GridFunction<f64> {
        GridFunction::from_fn(cplx(-1.0, -1.0), h, n, n, f).unwrap()
    }

    #[test]
    fn cauchy_transform_examples() {
        let d0 = DiscreteMeasure::dirac(cplx::<f64>(0.0, 0.0));
        let v = cauchy_transform_measure(&d0, cplx(2.0, 0.0)).unwrap();
        assert!((v - cplx(-0.5, 0.0)).norm() < 1e-15);

        // Linearity over two point masses.
        let m = DiscreteMeasure::new(vec![cplx(0.0, 0.0), cplx(1.0, 1.0)], vec![0.3, 0.7]).unwrap();
        let z = cplx(3.0, -2.0);
        let direct = cauchy_transform_measure(&m, z).unwrap();
        let split = cauchy_transform_measure(&DiscreteMeasure::dirac(cplx(0.0, 0.0)), z).unwrap()
            * 0.3
            + cauchy_transform_measure(&DiscreteMeasure::dirac(cplx(1.0, 1.0)), z).unwrap() * 0.7;
        assert!((direct - split).norm() < 1e-14);

        // Asymptotics: z C(mu)(z) -> -mu(C).
        let z = cplx(1e6, 0.0);
        let v = cauchy_transform_measure(&m, z).unwrap();
        assert!((z * v + cplx(1.0, 0.0)).norm() < 1e-6);

        assert!(matches!(
            cauchy_transform_measure(&d0, cplx(0.0, 0.0)),
            Err(Error::PointAtAtom { .. })
        ));
    }

    #[test]
    fn dbar_classical_symbols() {
        let h = 1.0 / 64.0;
        // Analytic: dbar z = 0 exactly for the centered stencil.
        let g = grid(h, 129, |z| z);
        let d = dbar(&g);
        for (i, j) in d.interior() {
            assert!(d.at(i, j).norm() < 1e-13);
        }
        // Anti-analytic: dbar conj(z) = 1.
        let g = grid(h, 129, |z| z.conj());
        let d = dbar(&g);
        for (i, j) in d.interior() {
            assert!((d.at(i, j) - cplx(1.0, 0.0)).norm() < 1e-12);
        }
        // dbar |z|^2 = z, exact for the quadratic stencil.
        let g = grid(h, 129, |z| cplx(z.norm_sqr(), 0.0));
        let d = dbar(&g);
        for (i, j) in d.interior() {
            assert!((d.at(i, j) - d.point(i, j)).norm() < 1e-12);
        }
    }

    #[test]
    fn partition_sums_to_one_with_local_supports() {
        let template = grid(1.0 / 32.0, 65, |_| cplx(0.0, 0.0));
        let bumps = partition_of_unity(&template, 0.5).unwrap();
        assert_eq!(bumps.len(), 16);
        // Pointwise sum is 1 and every value lies in [0, 1].
        for idx in 0..template.values.len() {
            let mut sum = 0.0;
            for b in &bumps {
                let v = b.values[idx].re;
                assert!((-1e-12..=1.0 + 1e-12).contains(&v));
                sum += v;
            }
            assert!((sum - 1.0).abs() < 1e-10, "partition sum {sum}");
        }
        // Supports: each bump vanishes outside its doubled square.
        let cell = 0.5;
        for (k, b) in bumps.iter().enumerate() {
            let cx = (k % 4) as f64;
            let cy = (k / 4) as f64;
            let x0 = -1.0 + cx * cell - cell / 2.0;
            let x1 = -1.0 + (cx + 1.0) * cell + cell / 2.0;
            let y0 = -1.0 + cy * cell - cell / 2.0;
            let y1 = -1.0 + (cy + 1.0) * cell + cell / 2.0;
            for i in 0..b.height {
                for j in 0..b.width {
                    let p = b.point(i, j);
                    let inside_2q = (k % 4 == 0 || p.re >= x0)
                        && (k % 4 == 3 || p.re <= x1)
                        && (k / 4 == 0 || p.im >= y0)
                        && (k / 4 == 3 || p.im <= y1);
                    if !inside_2q {
                        assert_eq!(b.at(i, j).re, 0.0, "bump {k} leaks at {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn localization_reconstructs_analytic_f() {
        // f analytic off a far pole: sum_j V_{phi_j} f recovers f on the
        // interior, and the two formulas agree at O(h).
        let h = 1.0 / 32.0;
        let n = 65;
        let z0 = cplx(1.35, 0.4);
        let f = grid(h, n, |z| cplx::<f64>(1.0, 0.0) / (z - z0));
        let bumps = partition_of_unity(&f, 0.5).unwrap();
        let mut sum = grid(h, n, |_| cplx(0.0, 0.0));
        for phi in &bumps {
            let v = vitushkin_localize(&f, phi).unwrap();
            sum = pointwise(&sum, &v, |a, b| a + b);
        }
        let err = sum.max_interior_diff(&f).unwrap();
        assert!(err <= 10.0 * h, "reconstruction error {err}");
    }

    #[test]
    fn localization_formulas_agree() {
        let h = 1.0 / 32.0;
        let n = 65;
        let z0 = cplx(1.35, 0.4);
        let f = grid(h, n, |z| cplx::<f64>(1.0, 0.0) / (z - z0));
        let bumps = partition_of_unity(&f, 0.5).unwrap();
        let (_, _, diff) = vitushkin_pair(&f, &bumps[5]).unwrap();
        assert!(diff <= 10.0 * h, "formula difference {diff}");
    }

    #[test]
    fn zero_bump_localizes_to_zero() {
        let h = 1.0 / 16.0;
        let f = grid(h, 33, |z| z * z);
        let phi = grid(h, 33, |_| cplx(0.0, 0.0));
        let v = vitushkin_localize(&f, &phi).unwrap();
        for val in &v.values {
            assert_eq!(*val, cplx(0.0, 0.0));
        }
    }

    #[test]
    fn localization_of_entire_f_has_small_dbar() {
        // f(z) = z^2 analytic on the whole grid: dbar(V_phi f) stays at the
        // discretization order on the interior.
        let h = 1.0 / 32.0;
        let f = grid(h, 65, |z| z * z);
        let bumps = partition_of_unity(&f, 0.5).unwrap();
        let v = vitushkin_localize(&f, &bumps[5]).unwrap();
        let dv = dbar(&v);
        let mut worst: f64 = 0.0;
        for (i, j) in dv.interior() {
            // The convolution term has O(h) kinks near the bump ring; the
            // analytic part contributes nothing.
            worst = worst.max(dv.at(i, j).norm());
        }
        assert!(worst <= 12.0 * h, "dbar magnitude {worst}");
    }

    #[test]
    fn dbar_of_cauchy_transform_pairs_to_minus_pi() {
        // <dbar(C delta_0), psi> = -pi psi(0) within 5% at h = 1/128. The
        // grid is offset half a cell so the atom sits between nodes.
        let h = 1.0 / 128.0;
        let n = 256;
        let origin = cplx(-1.0 + h / 2.0, -1.0 + h / 2.0);
        let d0 = DiscreteMeasure::dirac(cplx::<f64>(0.0, 0.0));
        let cmu =
            GridFunction::from_fn(origin, h, n, n, |z| cauchy_transform_measure(&d0, z).unwrap())
                .unwrap();
        let dc = dbar(&cmu);
        // Tensor smoothstep bump: plateau 1 near the origin, support radius
        // 0.4.
        let bump1d = |t: f64| -> f64 {
            let a = 0.3;
            let w = 0.2;
            let up = smooth_ramp((t + a) / w);
            let down = smooth_ramp((t - a) / w);
            up - down
        };
        let psi = GridFunction::from_fn(origin, h, n, n, |z| cplx(bump1d(z.re) * bump1d(z.im), 0.0))
            .unwrap();
        let pairing = weak_pairing(&dc, &psi).unwrap();
        let expected = -std::f64::consts::PI;
        assert!(
            (pairing.re - expected).abs() < 0.05 * expected.abs(),
            "pairing {pairing} vs -pi"
        );
        assert!(pairing.im.abs() < 0.05);
    }

    #[test]
    fn linearity_of_operators() {
        let h = 1.0 / 16.0;
        let f = grid(h, 33, |z| z * z);
        let g = grid(h, 33, |z| z.conj());
        let phi = partition_of_unity(&f, 0.5).unwrap().remove(5);
        let sum = pointwise(&f, &g, |a, b| a + b);
        let v_sum = vitushkin_localize(&sum, &phi).unwrap();
        let v_f = vitushkin_localize(&f, &phi).unwrap();
        let v_g = vitushkin_localize(&g, &phi).unwrap();
        let v_split = pointwise(&v_f, &v_g, |a, b| a + b);
        let err = v_sum.max_interior_diff(&v_split).unwrap();
        assert!(err < 1e-12, "linearity error {err}");
    }

    #[test]
    fn binary_roundtrip() {
        let g = grid(1.0 / 8.0, 17, |z| z * z - cplx(0.5, 0.25));
        let dir = std::env::temp_dir().join("caplab_grid_test.bin");
        g.write_binary(&dir).unwrap();
        let back = GridFunction::<f64>::read_binary(&dir).unwrap();
        assert_eq!(g, back);
        let _ = std::fs::remove_file(&dir);
    }
}
