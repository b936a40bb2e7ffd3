//! Symbolic layout of every parameter vector: which lumped coefficient
//! sits at which index, the regressor it multiplies, and its unit.

use crate::model::{Axis, ModelKind};

/// One regression column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnSpec {
    /// Lumped coefficient carried by this column.
    pub symbol: &'static str,
    /// Regressor monomial multiplying it.
    pub regressor: &'static str,
    /// Exponent of m/s in the regressor.
    speed_exp: i8,
    /// Exponent of rad/s in the regressor.
    rate_exp: i8,
}

const fn col(
    symbol: &'static str,
    regressor: &'static str,
    speed_exp: i8,
    rate_exp: i8,
) -> ColumnSpec {
    ColumnSpec {
        symbol,
        regressor,
        speed_exp,
        rate_exp,
    }
}

/// Index tables of the lumped disturbance coefficients `P`, `Q`, `R`, the
/// bias `c̄` and the thrust-coupled entries inside each parameter vector.
#[derive(Debug, Clone, Copy)]
pub struct LumpedDisturbanceShape {
    pub kind: ModelKind,
    pub axis: Axis,
    pub columns: &'static [ColumnSpec],
}

impl LumpedDisturbanceShape {
    pub fn of(kind: ModelKind, axis: Axis) -> Self {
        let columns: &'static [ColumnSpec] = match (kind, axis) {
            (ModelKind::Static, Axis::Surge) => &STATIC_SURGE,
            (ModelKind::Static, Axis::Sway) => &STATIC_SWAY,
            (ModelKind::Static, Axis::Yaw) => &STATIC_YAW,
            (ModelKind::Dynamic, Axis::Surge) => &DYNAMIC_SURGE,
            (ModelKind::Dynamic, Axis::Sway) => &DYNAMIC_SWAY,
            (ModelKind::Dynamic, Axis::Yaw) => &DYNAMIC_YAW,
        };
        Self {
            kind,
            axis,
            columns,
        }
    }

    /// One-based indices of the columns that multiply PWM monomials.
    pub fn thrust_indices(&self) -> std::ops::RangeInclusive<usize> {
        match (self.kind, self.axis) {
            (ModelKind::Static, Axis::Surge) => 6..=7,
            (ModelKind::Static, _) => 10..=13,
            (ModelKind::Dynamic, Axis::Surge) => 10..=11,
            (ModelKind::Dynamic, _) => 18..=21,
        }
    }

    /// One-based indices of the columns forced to zero on FF data.
    pub fn ff_cancelled(&self) -> &'static [usize] {
        match (self.kind, self.axis) {
            (_, Axis::Surge) => &[],
            (ModelKind::Static, _) => &[10, 12],
            (ModelKind::Dynamic, _) => &[18, 20],
        }
    }

    /// One-based index of the constant column.
    pub fn bias_index(&self) -> usize {
        match (self.kind, self.axis) {
            (ModelKind::Static, Axis::Surge) => 5,
            (ModelKind::Static, _) => 9,
            (ModelKind::Dynamic, Axis::Surge) => 9,
            (ModelKind::Dynamic, _) => 17,
        }
    }

    /// Unit of the coefficient at column `i` (zero-based), given that the
    /// target is a per-step velocity increment of this axis.
    pub fn unit(&self, i: usize) -> String {
        let c = &self.columns[i];
        let (ts, tr) = match self.axis {
            Axis::Yaw => (0, 1),
            _ => (1, 0),
        };
        format_unit(ts - c.speed_exp, tr - c.rate_exp)
    }
}

fn factor(name: &str, e: i8) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("({name})^{e}")),
    }
}

fn format_unit(speed: i8, rate: i8) -> String {
    let parts: Vec<String> = [factor("m/s", speed), factor("rad/s", rate)]
        .into_iter()
        .flatten()
        .collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(" ")
    }
}

const S: &str = "dbar^2 + ddelta^2/4";

static STATIC_SURGE: [ColumnSpec; 7] = [
    col("h P_u(1,1)", "u|u|", 2, 0),
    col("2h Q_u(2,3)", "v r", 1, 1),
    col("h Q_u(3,3)", "r^2", 0, 2),
    col("h R_u(1)", "u", 1, 0),
    col("h c_u", "1", 0, 0),
    col("2h Minv(1,1) a_f", S, 0, 0),
    col("2h Minv(1,1) b_f", "dbar", 0, 0),
];

macro_rules! static_turning {
    ($name:ident, $p:literal, $m:literal) => {
        static $name: [ColumnSpec; 13] = [
            col(concat!("h P_", $p, "(2,2)"), "v|v|", 2, 0),
            col(concat!("h P_", $p, "(2,3)"), "v|r|", 1, 1),
            col(concat!("h P_", $p, "(3,2)"), "r|v|", 1, 1),
            col(concat!("h P_", $p, "(3,3)"), "r|r|", 0, 2),
            col(concat!("2h Q_", $p, "(1,2)"), "u v", 2, 0),
            col(concat!("2h Q_", $p, "(1,3)"), "u r", 1, 1),
            col(concat!("h R_", $p, "(2)"), "v", 1, 0),
            col(concat!("h R_", $p, "(3)"), "r", 0, 1),
            col(concat!("h c_", $p), "1", 0, 0),
            col(
                concat!("h Minv(", $m, ") d/2 (a_L - a_R)"),
                concat!("sgn (", "dbar^2 + ddelta^2/4", ")"),
                0,
                0,
            ),
            col(
                concat!("h Minv(", $m, ") d/2 (a_L + a_R)"),
                "dbar ddelta",
                0,
                0,
            ),
            col(
                concat!("h Minv(", $m, ") d/2 (b_L - b_R)"),
                "sgn dbar",
                0,
                0,
            ),
            col(
                concat!("h Minv(", $m, ") d/2 (b_L + b_R)"),
                "ddelta/2",
                0,
                0,
            ),
        ];
    };
}
static_turning!(STATIC_SWAY, "v", "2,3");
static_turning!(STATIC_YAW, "r", "3,3");

static DYNAMIC_SURGE: [ColumnSpec; 11] = [
    col("alpha + h R_u(1)", "u(k)", 1, 0),
    col("-alpha h P_u(1,1)", "u|u|(k-1)", 2, 0),
    col("-2 alpha h Q_u(2,3)", "v r(k-1)", 1, 1),
    col("-alpha h Q_u(3,3)", "r^2(k-1)", 0, 2),
    col("-alpha (1 + h R_u(1))", "u(k-1)", 1, 0),
    col("h P_u(1,1)", "u|u|(k)", 2, 0),
    col("2h Q_u(2,3)", "v r(k)", 1, 1),
    col("h Q_u(3,3)", "r^2(k)", 0, 2),
    col("h (1 - alpha) c_u", "1", 0, 0),
    col("2h beta Minv(1,1) a_f", "dbar^2 + ddelta^2/4 (k-1)", 0, 0),
    col("2h beta Minv(1,1) b_f", "dbar(k-1)", 0, 0),
];

macro_rules! dynamic_turning {
    ($name:ident, $p:literal, $m:literal, $own:literal, $own_idx:literal, $other:literal, $other_idx:literal, $own_s:literal, $own_r:literal, $oth_s:literal, $oth_r:literal) => {
        static $name: [ColumnSpec; 21] = [
            col(
                concat!("alpha + h R_", $p, "(", $own_idx, ")"),
                concat!($own, "(k)"),
                $own_s,
                $own_r,
            ),
            col(concat!("-alpha h P_", $p, "(2,2)"), "v|v|(k-1)", 2, 0),
            col(concat!("-alpha h P_", $p, "(2,3)"), "v|r|(k-1)", 1, 1),
            col(concat!("-alpha h P_", $p, "(3,2)"), "r|v|(k-1)", 1, 1),
            col(concat!("-alpha h P_", $p, "(3,3)"), "r|r|(k-1)", 0, 2),
            col(concat!("-2 alpha h Q_", $p, "(1,2)"), "u v(k-1)", 2, 0),
            col(concat!("-2 alpha h Q_", $p, "(1,3)"), "u r(k-1)", 1, 1),
            col(
                if $own_idx == 2 {
                    concat!("-alpha (1 + h R_", $p, "(2))")
                } else {
                    concat!("-alpha h R_", $p, "(2)")
                },
                "v(k-1)",
                1,
                0,
            ),
            col(
                if $own_idx == 3 {
                    concat!("-alpha (1 + h R_", $p, "(3))")
                } else {
                    concat!("-alpha h R_", $p, "(3)")
                },
                "r(k-1)",
                0,
                1,
            ),
            col(concat!("h P_", $p, "(2,2)"), "v|v|(k)", 2, 0),
            col(concat!("h P_", $p, "(2,3)"), "v|r|(k)", 1, 1),
            col(concat!("h P_", $p, "(3,2)"), "r|v|(k)", 1, 1),
            col(concat!("h P_", $p, "(3,3)"), "r|r|(k)", 0, 2),
            col(concat!("2h Q_", $p, "(1,2)"), "u v(k)", 2, 0),
            col(concat!("2h Q_", $p, "(1,3)"), "u r(k)", 1, 1),
            col(
                concat!("h R_", $p, "(", $other_idx, ")"),
                concat!($other, "(k)"),
                $oth_s,
                $oth_r,
            ),
            col(concat!("h (1 - alpha) c_", $p), "1", 0, 0),
            col(
                concat!("h beta Minv(", $m, ") d/2 (a_L - a_R)"),
                "sgn (dbar^2 + ddelta^2/4)(k-1)",
                0,
                0,
            ),
            col(
                concat!("h beta Minv(", $m, ") d/2 (a_L + a_R)"),
                "dbar ddelta(k-1)",
                0,
                0,
            ),
            col(
                concat!("h beta Minv(", $m, ") d/2 (b_L - b_R)"),
                "sgn dbar(k-1)",
                0,
                0,
            ),
            col(
                concat!("h beta Minv(", $m, ") d/2 (b_L + b_R)"),
                "ddelta/2(k-1)",
                0,
                0,
            ),
        ];
    };
}
dynamic_turning!(DYNAMIC_SWAY, "v", "2,3", "v", 2, "r", 3, 1, 0, 0, 1);
dynamic_turning!(DYNAMIC_YAW, "r", "3,3", "r", 3, "v", 2, 0, 1, 1, 0);
