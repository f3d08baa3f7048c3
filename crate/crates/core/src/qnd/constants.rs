//! CODATA constants in SI units.

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
pub const HBAR: f64 = 1.054_571_817e-34;
