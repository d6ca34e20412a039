//! Complexes and metrics to fill in: Cayley-complex balls, Rips complexes, grids,
//! trees, and the four-point hyperbolicity constant.
//!
//! Vertices of Cayley graphs form a 1-net, so complexes built here use `ε = 1`.

mod cayley;
mod delta;
mod metric;
mod rips;

pub use cayley::{cayley_ball, Presentation, HEURISTIC_WARNING};
pub use delta::{estimate_delta, DeltaMode, HyperbolicityEstimate, DEFAULT_EXACT_CAP};
pub use metric::{gromov_product, FiniteMetric, Truncation};
pub use rips::{grid_complex, rips_complex, tree_complex};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::chains::Complex;
use crate::error::{Error, Result};

/// A named complex family: `grid:WxH`, `tree:V,D`, or a group preset (see [`Presentation::preset`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Grid { w: u32, h: u32 },
    Tree { valence: u32, depth: u32 },
    Group(String),
}

impl Preset {
    /// Build the complex. `radius` is the ball radius for group presets and is
    /// ignored by grids and trees, whose size is part of the name.
    pub fn build(&self, radius: u32) -> Result<(Complex, Arc<FiniteMetric>)> {
        match self {
            Preset::Grid { w, h } => grid_complex(*w, *h),
            Preset::Tree { valence, depth } => tree_complex(*valence, *depth),
            Preset::Group(name) => cayley_ball(&Presentation::preset(name)?, radius),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config(format!("cannot read preset {s:?}"));
        if let Some(rest) = s.strip_prefix("grid:") {
            let (w, h) = rest.split_once('x').ok_or_else(bad)?;
            return Ok(Preset::Grid {
                w: w.parse().map_err(|_| bad())?,
                h: h.parse().map_err(|_| bad())?,
            });
        }
        if let Some(rest) = s.strip_prefix("tree:") {
            let (v, d) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(Preset::Tree {
                valence: v.parse().map_err(|_| bad())?,
                depth: d.parse().map_err(|_| bad())?,
            });
        }
        Presentation::preset(s)?;
        Ok(Preset::Group(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Grid { w, h } => write!(f, "grid:{w}x{h}"),
            Preset::Tree { valence, depth } => write!(f, "tree:{valence},{depth}"),
            Preset::Group(name) => f.write_str(name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for s in ["grid:3x3", "tree:3,4", "f2", "z2", "genus2", "z2abc"] {
            let p: Preset = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("grid:3".parse::<Preset>().is_err());
        assert!("h3".parse::<Preset>().is_err());
    }

    #[test]
    fn grid_preset_vertex_count() {
        let (cx, _) = "grid:3x3".parse::<Preset>().unwrap().build(0).unwrap();
        assert_eq!(cx.n_vertices(), 16);
        assert_eq!(cx.n_cells(2), 18);
    }
}
