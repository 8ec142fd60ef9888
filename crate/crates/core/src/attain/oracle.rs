use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::Operator;
use crate::error::{Error, Result};

/// One grid point of a brute-force profile.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileSample {
    /// Polar angle in the plane, azimuth in space.
    pub angle: f64,
    /// Unit vector of the domain.
    pub x: Vec<f64>,
    pub norm_tx: f64,
}

/// `‖Tx‖` on a grid of the unit sphere.
///
/// In the plane the grid is `samples` equally spaced angles; in space it is a
/// latitude-longitude grid with about `samples` nodes. Grid directions are
/// normalized in the domain norm.
pub fn oracle_profile(op: &Operator, samples: usize) -> Result<Vec<ProfileSample>> {
    if samples < 100 {
        return Err(Error::InvalidArgument(format!("oracle needs at least 100 samples, got {samples}")));
    }
    let dom = op.domain();
    let mut out = Vec::with_capacity(samples);
    let mut push = |angle: f64, dir: Vec<f64>| {
        let x = dom.normalize(&dir).expect("grid direction is nonzero");
        let norm_tx = op.image_norm(&x);
        out.push(ProfileSample { angle, x, norm_tx });
    };
    match dom.dim() {
        2 => {
            for k in 0..samples {
                let a = 2.0 * PI * k as f64 / samples as f64;
                push(a, alloc::vec![libm::cos(a), libm::sin(a)]);
            }
        }
        3 => {
            let n_lat = libm::round(libm::sqrt(samples as f64 / 2.0)).max(2.0) as usize;
            let n_lon = 2 * n_lat;
            for i in 0..n_lat {
                let phi = PI * (i as f64 + 0.5) / n_lat as f64;
                for k in 0..n_lon {
                    let a = 2.0 * PI * k as f64 / n_lon as f64;
                    push(a, alloc::vec![libm::sin(phi) * libm::cos(a), libm::sin(phi) * libm::sin(a), libm::cos(phi)]);
                }
            }
        }
        d => return Err(Error::Unsupported(format!("oracle profile supports dimensions 2 and 3, not {d}"))),
    }
    Ok(out)
}
