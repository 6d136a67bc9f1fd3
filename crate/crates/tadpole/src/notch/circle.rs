//! Algebraic circle fitting in the complex plane (Taubin method).
//!
//! Taubin's fit normalizes the algebraic distance by the gradient magnitude,
//! which keeps the radius nearly unbiased on partial arcs, where the plain
//! Kasa fit shrinks toward the data. The characteristic root is found by
//! Newton iteration from zero, following Chernov's formulation; for exact
//! circle data the root is zero and the fit reproduces the circumcircle.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A fitted circle with its goodness-of-fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleGeometry {
    pub center: Complex64,
    pub radius: f64,
    /// Root-mean-square radial deviation of the points from the circle.
    pub rms_residual: f64,
}

/// Least-squares circle through `points` (Taubin method).
///
/// Needs at least three non-collinear points.
pub fn fit_circle(points: &[Complex64]) -> Result<CircleGeometry> {
    let n = points.len();
    if n < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "circle fit needs at least 3 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.re).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.im).sum::<f64>() / nf;

    let (mut mxx, mut myy, mut mxy, mut mxz, mut myz, mut mzz) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points {
        let u = p.re - mean_x;
        let v = p.im - mean_y;
        let z = u * u + v * v;
        mxx += u * u;
        myy += v * v;
        mxy += u * v;
        mxz += u * z;
        myz += v * z;
        mzz += z * z;
    }
    mxx /= nf;
    myy /= nf;
    mxy /= nf;
    mxz /= nf;
    myz /= nf;
    mzz /= nf;

    let mz = mxx + myy;
    let cov_xy = mxx * myy - mxy * mxy;
    let var_z = mzz - mz * mz;

    // Collinear (or coincident) points: the planar scatter is rank-deficient.
    if cov_xy.is_nan() || cov_xy <= 1e-24 * mz * mz {
        return Err(Error::DegenerateGeometry(
            "points are collinear or coincident; no unique circle".into(),
        ));
    }

    let a3 = 4.0 * mz;
    let a2 = -3.0 * mz * mz - mzz;
    let a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
    let a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) - var_z * cov_xy;
    let a22 = a2 + a2;
    let a33 = a3 + a3 + a3;

    // Newton from x = 0; the relevant root is the smallest non-negative one.
    let mut x = 0.0_f64;
    let mut y = a0;
    for _ in 0..32 {
        let dy = a1 + x * (a22 + x * a33);
        if dy == 0.0 {
            break;
        }
        let x_new = x - y / dy;
        if !x_new.is_finite() || (x_new - x).abs() <= 1e-14 * x.abs() {
            x = if x_new.is_finite() { x_new } else { x };
            break;
        }
        let y_new = a0 + x_new * (a1 + x_new * (a2 + x_new * a3));
        if y_new.abs() > y.abs() {
            break;
        }
        x = x_new;
        y = y_new;
    }

    let det = x * x - x * mz + cov_xy;
    if det.abs() < 1e-30 {
        return Err(Error::DegenerateGeometry(
            "circle fit determinant vanished; points do not determine a circle".into(),
        ));
    }
    let xc = (mxz * (myy - x) - myz * mxy) / det / 2.0;
    let yc = (myz * (mxx - x) - mxz * mxy) / det / 2.0;
    let radius = (xc * xc + yc * yc + mz).sqrt();
    let center = Complex64::new(xc + mean_x, yc + mean_y);
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::DegenerateGeometry(format!(
            "circle fit produced a non-positive radius {radius}"
        )));
    }

    let rms_residual = (points
        .iter()
        .map(|p| ((p - center).norm() - radius).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();

    Ok(CircleGeometry {
        center,
        radius,
        rms_residual,
    })
}
