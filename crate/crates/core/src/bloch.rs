//! Bloch-sphere kernel.
//!
//! States are real 3-vectors on the unit sphere with the ground state `|g⟩` at the
//! north pole `(0, 0, +1)` and the excited state `|e⟩` at `(0, 0, -1)`, so the
//! excitation probability is `(1 - z) / 2`. Rotations follow the right-hand rule.
//!
//! Published Bloch-sphere figures often use a sphere of radius ½ (spin expectation
//! values). Lengths on such a figure convert to this module's unit sphere by a
//! factor of two: a projected circle of diameter 0.5 there is a circle of radius
//! 0.5 here.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Tolerance on `|z|` beyond the unit sphere before a vector is treated as unphysical.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly TAU.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Ensemble state as a Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// `|g⟩`, the north pole.
    pub const fn ground() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    /// `|e⟩`, the south pole.
    pub const fn excited() -> Self {
        Self::new(0.0, 0.0, -1.0)
    }

    /// Unit vector from a polar angle measured from `|g⟩` and an azimuth measured from +x.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self::new(sp * ca, sp * sa, cp)
    }

    /// Equal superposition on the equator at the given azimuth.
    pub fn equator(azimuth: f64) -> Self {
        let (s, c) = azimuth.sin_cos();
        Self::new(c, s, 0.0)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Azimuth of the xy-projection in `[0, 2π)`.
    pub fn azimuth(&self) -> f64 {
        reduce_angle(self.y.atan2(self.x))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("Bloch vector must be finite, got {self:?}")))
        }
    }
}

/// Rotation axis lying in the xy-plane, `(cos φ, sin φ, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InPlaneAxis {
    phi: f64,
}

impl InPlaneAxis {
    pub fn new(phi: f64) -> Result<Self> {
        ensure_finite("axis azimuth", phi)?;
        Ok(Self { phi: reduce_angle(phi) })
    }

    /// The x-axis.
    pub const fn x() -> Self {
        Self { phi: 0.0 }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit(&self) -> BlochVector {
        BlochVector::equator(self.phi)
    }

    /// Rotates `v` by `theta` about this axis.
    pub fn rotate(&self, v: BlochVector, theta: f64) -> Result<BlochVector> {
        rotate_inplane(v, self.phi, theta)
    }
}

/// Rotates `v` by the pulse area `theta` about the in-plane axis at azimuth `phi` (Rodrigues).
pub fn rotate_inplane(v: BlochVector, phi: f64, theta: f64) -> Result<BlochVector> {
    v.check_finite()?;
    ensure_finite("axis azimuth", phi)?;
    ensure_finite("pulse area", theta)?;
    Ok(rotate_unchecked(v, reduce_angle(phi), reduce_angle(theta)))
}

pub(crate) fn rotate_unchecked(v: BlochVector, phi: f64, theta: f64) -> BlochVector {
    if theta == 0.0 {
        return v;
    }
    let (s, c) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let along = c * v.x + s * v.y;
    let k = along * (1.0 - ct);
    // n × v for n = (c, s, 0)
    let (cx, cy, cz) = (s * v.z, -c * v.z, c * v.y - s * v.x);
    BlochVector::new(
        v.x * ct + cx * st + c * k,
        v.y * ct + cy * st + s * k,
        v.z * ct + cz * st,
    )
}

/// Free precession: rotates `v` by `beta` about +z.
pub fn precess(v: BlochVector, beta: f64) -> Result<BlochVector> {
    v.check_finite()?;
    ensure_finite("precession angle", beta)?;
    Ok(precess_unchecked(v, reduce_angle(beta)))
}

pub(crate) fn precess_unchecked(v: BlochVector, beta: f64) -> BlochVector {
    if beta == 0.0 {
        return v;
    }
    let (s, c) = beta.sin_cos();
    BlochVector::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z)
}

/// Probability of finding the ensemble in `|e⟩`, `(1 - z) / 2`.
pub fn excitation_probability(v: BlochVector) -> Result<f64> {
    if !v.z.is_finite() || v.z.abs() > 1.0 + PROBABILITY_TOLERANCE {
        return Err(Error::InvalidState(format!(
            "z component {} lies outside the Bloch sphere",
            v.z
        )));
    }
    Ok(((1.0 - v.z) / 2.0).clamp(0.0, 1.0))
}
