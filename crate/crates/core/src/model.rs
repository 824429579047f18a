//! Physical parameters and planar equations of motion.
//!
//! The boat is modelled in the plane with configuration `(x, y, theta)`,
//! where `theta` is the orientation of the flipper-bearing (bottom) body.
//! The motor angle `phi` of the driving mass relative to that body is a
//! prescribed input, so only its second derivative enters the dynamics,
//! through the reaction torque `-I_t * phi_ddot`.
//!
//! With `M = diag(m, m, I)` and `R(theta)` the planar rotation:
//!
//! ```text
//! M [x'', y'', theta'']ᵀ = theta'² K_f R [sin(β+ψ) sgn(theta'), cos(β+ψ), -K_t sgn(theta')]ᵀ
//!                        - K_b |v| [x', y', 0]ᵀ
//!                        - [0, 0, C_r theta']ᵀ
//!                        - [0, 0, I_t phi'']ᵀ
//! ```

use core::f64::consts::PI;
use core::fmt;

use libm::{cos, hypot, sin};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("asymmetry factor must satisfy |epsilon| < 1, got {0}")]
    InvalidAsymmetry(f64),
    #[error("non-finite input to `{0}`")]
    NonFinite(&'static str),
    #[error(
        "flipper load requires force >= 0 and 0 <= alpha <= pi/2, got force {force}, alpha {alpha}"
    )]
    InvalidLoad { force: f64, alpha: f64 },
}

pub(crate) fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

pub(crate) fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

/// Physical constants of the boat.
///
/// Angles are radians. `rotation_drag` is applied directly as a linear
/// damping gain on `theta'` (N·m·s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoatParams {
    /// `m`, total mass (kg).
    pub mass: f64,
    /// `I_t`, inertia of the driving mass (kg·m²).
    pub drive_inertia: f64,
    /// `I`, inertia of the whole robot (kg·m²).
    pub inertia: f64,
    /// `A_sub`, submerged body area (m²).
    pub submerged_area: f64,
    /// `r_t`, driving mass radius (m). Not used by the dynamics.
    pub drive_radius: f64,
    /// `r_b`, bottom body radius (m).
    pub body_radius: f64,
    /// `l_f`, flipper length (m).
    pub flipper_length: f64,
    /// `d_f`, flipper submerged depth (m).
    pub flipper_depth: f64,
    /// `beta`, angular location of the flipper hinge (rad).
    pub flipper_location: f64,
    /// `psi`, maximum flipper opening angle (rad).
    pub flipper_open_angle: f64,
    /// `rho`, water density (kg/m³). Zero switches every fluid force off.
    pub water_density: f64,
    /// `C_b`, body translation drag coefficient.
    pub body_drag_coeff: f64,
    /// `C_r`, linear rotational damping gain (N·m·s).
    pub rotation_drag: f64,
    /// `C_f`, flat-plate drag coefficient of an open flipper.
    pub flipper_drag_coeff: f64,
    /// Outer diameter of the top body (m). Only used for reference lines.
    pub hull_diameter: f64,
}

impl Default for BoatParams {
    fn default() -> Self {
        default_params()
    }
}

/// Reference design values.
///
/// `C_f` has no published value; 1.28 is the textbook normal-drag
/// coefficient of a flat plate. `C_r` is 1.2e-3 N·m·s, which puts the
/// free spin-down time `I / C_r` at about 1.4 s.
pub fn default_params() -> BoatParams {
    BoatParams {
        mass: 0.63,
        drive_inertia: 1.6e-3,
        inertia: 1.7e-3,
        submerged_area: 0.025,
        drive_radius: 0.075,
        body_radius: 0.025,
        flipper_length: 0.050,
        flipper_depth: 0.043,
        flipper_location: deg_to_rad(45.0),
        flipper_open_angle: deg_to_rad(-21.0),
        water_density: 1000.0,
        body_drag_coeff: 1.0,
        rotation_drag: 1.2e-3,
        flipper_drag_coeff: 1.28,
        hull_diameter: 0.1524,
    }
}

impl BoatParams {
    /// Same parameters with every fluid term removed (`rho = 0`, `C_r = 0`).
    pub fn fluidless(mut self) -> Self {
        self.water_density = 0.0;
        self.rotation_drag = 0.0;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("m", self.mass),
            ("I_t", self.drive_inertia),
            ("I", self.inertia),
            ("A_sub", self.submerged_area),
            ("r_b", self.body_radius),
            ("l_f", self.flipper_length),
            ("d_f", self.flipper_depth),
            ("C_b", self.body_drag_coeff),
            ("C_f", self.flipper_drag_coeff),
            ("hull_diameter", self.hull_diameter),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::InvalidParameter {
                    name,
                    requirement: "finite and > 0",
                    value,
                });
            }
        }
        let non_negative = [
            ("rho", self.water_density),
            ("C_r", self.rotation_drag),
            ("r_t", self.drive_radius),
        ];
        for (name, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::InvalidParameter {
                    name,
                    requirement: "finite and >= 0",
                    value,
                });
            }
        }
        if !self.flipper_location.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "beta",
                requirement: "finite",
                value: self.flipper_location,
            });
        }
        if !(self.flipper_open_angle.is_finite() && self.flipper_open_angle.abs() < PI / 2.0) {
            return Err(ModelError::InvalidParameter {
                name: "psi",
                requirement: "finite with |psi| < pi/2",
                value: self.flipper_open_angle,
            });
        }
        Ok(())
    }

    /// 64-bit FNV-1a digest over the bit patterns of every field.
    pub fn digest(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let fields = [
            self.mass,
            self.drive_inertia,
            self.inertia,
            self.submerged_area,
            self.drive_radius,
            self.body_radius,
            self.flipper_length,
            self.flipper_depth,
            self.flipper_location,
            self.flipper_open_angle,
            self.water_density,
            self.body_drag_coeff,
            self.rotation_drag,
            self.flipper_drag_coeff,
            self.hull_diameter,
        ];
        let mut hash = OFFSET;
        for field in fields {
            for byte in field.to_bits().to_le_bytes() {
                hash ^= u64::from(byte);
                hash = hash.wrapping_mul(PRIME);
            }
        }
        hash
    }

    pub fn flipper_location_deg(&self) -> f64 {
        rad_to_deg(self.flipper_location)
    }

    pub fn flipper_open_angle_deg(&self) -> f64 {
        rad_to_deg(self.flipper_open_angle)
    }

    pub fn set_flipper_location_deg(&mut self, deg: f64) {
        self.flipper_location = deg_to_rad(deg);
    }

    pub fn set_flipper_open_angle_deg(&mut self, deg: f64) {
        self.flipper_open_angle = deg_to_rad(deg);
    }
}

/// Lumped coefficients of the equations of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoeffs {
    /// `K_f`, flipper thrust coefficient (kg·m).
    pub thrust: f64,
    /// `K_t`, flipper torque arm (m).
    pub torque_arm: f64,
    /// `K_b`, body drag coefficient (kg/m).
    pub body_drag: f64,
}

/// `K_f`, `K_t` and `K_b` from the physical parameters.
///
/// All three are strictly positive for wet parameters; `K_f` and `K_b`
/// vanish when `rho = 0`.
pub fn derive_coeffs(p: &BoatParams) -> Result<DerivedCoeffs, ModelError> {
    p.validate()?;
    let rb = p.body_radius;
    let lf = p.flipper_length;
    let cos_psi = cos(p.flipper_open_angle);
    let thrust = 0.5
        * p.water_density
        * p.flipper_drag_coeff
        * p.flipper_depth
        * lf
        * (rb * rb + 0.25 * lf * lf + rb * lf * cos_psi);
    let torque_arm = rb * cos_psi + 0.5 * lf;
    let body_drag = 0.25 * p.water_density * p.body_drag_coeff * p.submerged_area;
    Ok(DerivedCoeffs {
        thrust,
        torque_arm,
        body_drag,
    })
}

/// Which flipper is open, decided by the sign of the bottom-body rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flipper {
    Left,
    Right,
    Neither,
}

impl fmt::Display for Flipper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flipper::Left => "left",
            Flipper::Right => "right",
            Flipper::Neither => "neither",
        })
    }
}

pub fn active_flipper(thetadot: f64) -> Flipper {
    if thetadot > 0.0 {
        Flipper::Left
    } else if thetadot < 0.0 {
        Flipper::Right
    } else {
        Flipper::Neither
    }
}

/// Per-flipper thrust skew: the left flipper's thrust is scaled by
/// `1 + epsilon`, the right by `1 - epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Asymmetry(f64);

impl Asymmetry {
    pub const NONE: Asymmetry = Asymmetry(0.0);

    pub fn new(epsilon: f64) -> Result<Self, ModelError> {
        if epsilon.is_finite() && epsilon.abs() < 1.0 {
            Ok(Asymmetry(epsilon))
        } else {
            Err(ModelError::InvalidAsymmetry(epsilon))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn negated(self) -> Self {
        Asymmetry(-self.0)
    }

    /// Thrust multiplier for the given flipper.
    pub fn gain(self, flipper: Flipper) -> f64 {
        match flipper {
            Flipper::Left => 1.0 + self.0,
            Flipper::Right => 1.0 - self.0,
            Flipper::Neither => 0.0,
        }
    }
}

/// Planar state: pose of the bottom body and its world-frame rates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimState {
    pub x: f64,
    pub y: f64,
    /// Unwrapped orientation of the bottom body (rad).
    pub theta: f64,
    pub xdot: f64,
    pub ydot: f64,
    pub thetadot: f64,
}

impl SimState {
    pub const REST: SimState = SimState {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
        xdot: 0.0,
        ydot: 0.0,
        thetadot: 0.0,
    };

    pub fn to_array(self) -> [f64; 6] {
        [
            self.x,
            self.y,
            self.theta,
            self.xdot,
            self.ydot,
            self.thetadot,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        SimState {
            x: a[0],
            y: a[1],
            theta: a[2],
            xdot: a[3],
            ydot: a[4],
            thetadot: a[5],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Accel {
    pub xddot: f64,
    pub yddot: f64,
    pub thetaddot: f64,
}

/// Solves the equations of motion for the accelerations.
pub fn accel(
    s: &SimState,
    phi_ddot: f64,
    p: &BoatParams,
    k: &DerivedCoeffs,
    a: Asymmetry,
) -> Result<Accel, ModelError> {
    if !s.is_finite() || !phi_ddot.is_finite() {
        return Err(ModelError::NonFinite("accel"));
    }
    Ok(accel_unchecked(s, phi_ddot, p, k, a))
}

#[inline]
pub(crate) fn accel_unchecked(
    s: &SimState,
    phi_ddot: f64,
    p: &BoatParams,
    k: &DerivedCoeffs,
    a: Asymmetry,
) -> Accel {
    let flipper = active_flipper(s.thetadot);
    let sign = match flipper {
        Flipper::Left => 1.0,
        Flipper::Right => -1.0,
        Flipper::Neither => 0.0,
    };
    let mag = s.thetadot * s.thetadot * k.thrust * a.gain(flipper);
    let open = p.flipper_location + p.flipper_open_angle;
    let fb_x = mag * sin(open) * sign;
    let fb_y = mag * cos(open);
    let thrust_torque = -mag * k.torque_arm * sign;

    let (st, ct) = (sin(s.theta), cos(s.theta));
    let fx = ct * fb_x - st * fb_y;
    let fy = st * fb_x + ct * fb_y;

    let speed = hypot(s.xdot, s.ydot);
    let xddot = (fx - k.body_drag * speed * s.xdot) / p.mass;
    let yddot = (fy - k.body_drag * speed * s.ydot) / p.mass;
    let thetaddot =
        (thrust_torque - p.rotation_drag * s.thetadot - p.drive_inertia * phi_ddot) / p.inertia;
    Accel {
        xddot,
        yddot,
        thetaddot,
    }
}

/// Orientation of the top body (driving mass).
pub fn top_orientation(theta: f64, phi: f64) -> f64 {
    theta + phi
}

/// Drag load on a partially open flipper plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipperLoad {
    /// Drag force magnitude on the plate (N).
    pub force: f64,
    /// Opening angle (rad), 0 when closed.
    pub alpha: f64,
}

impl FlipperLoad {
    pub fn new(force: f64, alpha: f64) -> Result<Self, ModelError> {
        if force.is_finite() && force >= 0.0 && (0.0..=PI / 2.0).contains(&alpha) {
            Ok(FlipperLoad { force, alpha })
        } else {
            Err(ModelError::InvalidLoad { force, alpha })
        }
    }
}

/// Torque that drag applies about the flipper hinge, pushing it further open.
pub fn opening_torque(load: FlipperLoad, flipper_length: f64) -> f64 {
    0.5 * flipper_length * load.force * sin(load.alpha)
}
