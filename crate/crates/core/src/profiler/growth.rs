//! Power-law fits of profiles.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Minimum number of envelope points a fit needs.
pub const MIN_POINTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GrowthLabel {
    Linear,
    Subquadratic,
    Quadratic,
    Superquadratic,
}

impl fmt::Display for GrowthLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthLabel::Linear => "linear",
            GrowthLabel::Subquadratic => "subquadratic",
            GrowthLabel::Quadratic => "quadratic",
            GrowthLabel::Superquadratic => "superquadratic",
        })
    }
}

impl FromStr for GrowthLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "linear" => GrowthLabel::Linear,
            "subquadratic" => GrowthLabel::Subquadratic,
            "quadratic" => GrowthLabel::Quadratic,
            "superquadratic" => GrowthLabel::Superquadratic,
            _ => return Err(Error::config(format!("unknown growth label {s:?}"))),
        })
    }
}

/// Exponent cut points: below `linear` is linear, below `subquadratic` is
/// subquadratic, up to `quadratic` (inclusive) is quadratic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBands {
    pub linear: f64,
    pub subquadratic: f64,
    pub quadratic: f64,
    /// Slack allowed above `(n+1)/n` for the sub-Euclidean flag and for trends.
    pub tolerance: f64,
}

impl Default for GrowthBands {
    fn default() -> Self {
        GrowthBands { linear: 1.25, subquadratic: 1.75, quadratic: 2.25, tolerance: 0.1 }
    }
}

impl GrowthBands {
    pub fn label(&self, alpha: f64) -> GrowthLabel {
        if alpha < self.linear {
            GrowthLabel::Linear
        } else if alpha < self.subquadratic {
            GrowthLabel::Subquadratic
        } else if alpha <= self.quadratic {
            GrowthLabel::Quadratic
        } else {
            GrowthLabel::Superquadratic
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthClass {
    pub label: GrowthLabel,
    pub alpha: f64,
    /// `alpha ± 2·standard error`.
    pub band: (f64, f64),
    /// Fitted `log f` at `log l = 0`.
    pub intercept: f64,
    /// `alpha <= (n+1)/n + tolerance`.
    pub sub_euclidean: bool,
    pub dim: usize,
    /// Points `(l, f)` used by the fit.
    pub points: Vec<(f64, f64)>,
    /// `log f − fit` at each point.
    pub residuals: Vec<f64>,
}

impl GrowthClass {
    /// Value of the fitted curve at `l`.
    pub fn fit(&self, l: f64) -> f64 {
        (self.intercept + self.alpha * l.ln()).exp()
    }
}

/// Least-squares line through `(x, y)`: slope, intercept, slope standard error, residuals.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, Vec<f64>) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let se = if xs.len() > 2 && sxx > 0.0 {
        (residuals.iter().map(|r| r * r).sum::<f64>() / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, intercept, se, residuals)
}

/// Fit `f ≈ C·l^α` to positive points by least squares in log-log coordinates.
///
/// Only the upper half of the distinct lengths enters the fit, but never fewer
/// than [`MIN_POINTS`] of them.
pub fn classify_points(points: &[(f64, f64)], dim: usize, bands: &GrowthBands) -> Result<GrowthClass> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(l, f)| l > 0.0 && f > 0.0).collect();
    let mut ls: Vec<f64> = pts.iter().map(|p| p.0).collect();
    ls.sort_by(f64::total_cmp);
    ls.dedup();
    if ls.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "a growth fit needs at least {MIN_POINTS} distinct lengths with positive filling norm, got {}",
            ls.len()
        )));
    }
    let keep = (ls.len() - ls.len() / 2).max(MIN_POINTS);
    let from = ls[ls.len() - keep];
    pts.retain(|p| p.0 >= from);
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (alpha, intercept, se, residuals) = least_squares(&xs, &ys);
    let n = dim.max(1) as f64;
    Ok(GrowthClass {
        label: bands.label(alpha),
        alpha,
        band: (alpha - 2.0 * se, alpha + 2.0 * se),
        intercept,
        sub_euclidean: alpha <= (n + 1.0) / n + bands.tolerance,
        dim,
        points: pts,
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubEuclideanReport {
    /// `max_l f(l) / l^((n+1)/n)`.
    pub c_hat: f64,
    /// Log-log slope of `f(l) / l^((n+1)/n)` over the upper half of the lengths.
    pub trend: f64,
    pub pass: bool,
}

/// Whether `f(l) / l^((n+1)/n)` stays bounded over the upper half of the data.
pub fn subeuclidean_points(points: &[(f64, f64)], n: usize, bands: &GrowthBands) -> Result<SubEuclideanReport> {
    if n == 0 {
        return Err(Error::contract("the sub-Euclidean check needs n >= 1"));
    }
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(l, f)| l > 0.0 && f > 0.0).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "the sub-Euclidean check needs at least {MIN_POINTS} points with positive filling norm, got {}",
            pts.len()
        )));
    }
    let e = (n as f64 + 1.0) / n as f64;
    let ratios: Vec<f64> = pts.iter().map(|&(l, f)| f / l.powf(e)).collect();
    let c_hat = ratios.iter().copied().fold(0.0, f64::max);
    let top = pts.len() / 2;
    let xs: Vec<f64> = pts[top..].iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = ratios[top..].iter().map(|r| r.ln()).collect();
    let (trend, ..) = least_squares(&xs, &ys);
    Ok(SubEuclideanReport { c_hat, trend, pass: trend <= bands.tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (1..=10).map(|l| (l as f64, f(l as f64))).collect()
    }

    #[test]
    fn monomials() {
        let b = GrowthBands::default();
        let c = classify_points(&pts(|l| 3.0 * l), 1, &b).unwrap();
        assert!((c.alpha - 1.0).abs() < 1e-9);
        assert_eq!(c.label, GrowthLabel::Linear);
        let q: Vec<(f64, f64)> = (1..=6).map(|n| (4.0 * n as f64, 2.0 * (n * n) as f64)).collect();
        let c = classify_points(&q, 1, &b).unwrap();
        assert!((c.alpha - 2.0).abs() < 1e-9);
        assert_eq!(c.label, GrowthLabel::Quadratic);
        let c = classify_points(&pts(|l| l.powf(1.5)), 2, &b).unwrap();
        assert!(c.sub_euclidean);
        assert!((c.fit(4.0) - 8.0).abs() < 1e-6);
    }

    #[test]
    fn scale_does_not_change_label() {
        let b = GrowthBands::default();
        for lambda in [0.01, 1.0, 250.0] {
            let c = classify_points(&pts(|l| lambda * l.powf(1.6)), 1, &b).unwrap();
            assert_eq!(c.label, GrowthLabel::Subquadratic);
        }
    }

    #[test]
    fn short_lengths_do_not_drag_the_fit() {
        let b = GrowthBands::default();
        // linear up to 10, then l²/10
        let p: Vec<(f64, f64)> = (1..=20).map(|l| (l as f64, (l * l).max(10 * l) as f64 / 10.0)).collect();
        let c = classify_points(&p, 1, &b).unwrap();
        assert!((c.alpha - 2.0).abs() < 1e-9);
        assert_eq!(c.points.len(), 10);
    }

    #[test]
    fn too_few_points() {
        let b = GrowthBands::default();
        let r = classify_points(&[(1.0, 1.0), (2.0, 2.0), (3.0, 0.0)], 1, &b);
        assert!(matches!(r, Err(Error::InsufficientData(_))));
    }

    #[test]
    fn subeuclidean_cases() {
        let b = GrowthBands::default();
        assert!(subeuclidean_points(&pts(|l| l), 1, &b).unwrap().pass);
        assert!(subeuclidean_points(&pts(|l| l * l), 1, &b).unwrap().pass);
        assert!(!subeuclidean_points(&pts(|l| l.powf(2.5)), 1, &b).unwrap().pass);
    }

    #[test]
    fn labels_round_trip() {
        for l in [GrowthLabel::Linear, GrowthLabel::Subquadratic, GrowthLabel::Quadratic, GrowthLabel::Superquadratic] {
            assert_eq!(l.to_string().parse::<GrowthLabel>().unwrap(), l);
        }
    }
}
