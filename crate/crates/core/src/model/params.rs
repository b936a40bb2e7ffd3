use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

macro_rules! param_vector {
    ($(#[$meta:meta])* $name:ident, $len:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub [f64; $len]);

        impl $name {
            pub const LEN: usize = $len;

            pub fn from_slice(x: &[f64]) -> Result<Self> {
                if x.len() != $len {
                    return Err(invalid(format!(
                        "{} needs {} entries, got {}",
                        stringify!($name),
                        $len,
                        x.len()
                    )));
                }
                if let Some(i) = x.iter().position(|v| !v.is_finite()) {
                    return Err(invalid(format!(
                        "{} entry {} is not finite",
                        stringify!($name),
                        i + 1
                    )));
                }
                let mut out = [0.0; $len];
                out.copy_from_slice(x);
                Ok(Self(out))
            }

            /// One-based access matching the tabulated parameter numbering.
            pub fn at(&self, index: usize) -> f64 {
                self.0[index - 1]
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }
        }

        impl Default for $name {
            fn default() -> Self {
                Self([0.0; $len])
            }
        }
    };
}

param_vector!(
    /// Static surge coefficients. Entries 1..5 lump disturbance and bias,
    /// entries 6 and 7 carry the quadratic and linear thrust gains.
    StaticSurgeParams,
    7
);
param_vector!(
    /// Static sway or yaw coefficients. Entries 10..13 are thrust-coupled.
    StaticSwayYawParams,
    13
);
param_vector!(
    /// Dynamic surge coefficients. Entries 10 and 11 are thrust-coupled.
    DynamicSurgeParams,
    11
);
param_vector!(
    /// Dynamic sway or yaw coefficients. Entries 18..21 are thrust-coupled.
    DynamicSwayYawParams,
    21
);
