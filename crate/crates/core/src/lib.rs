//! Kummer, gamma and beta-first-kind laws together with the transform
//!
//! ```text
//! U = (1 + 1/(X+Y)) / (1 + 1/X),    V = X + Y
//! ```
//!
//! and a harness that checks, by seeded Monte Carlo and by quadrature, that
//! for `X ~ K(a,b,c)` independent of `Y ~ G(b,c)` the pair `(U, V)` is
//! independent with `U ~ Beta(a,b)` and `V ~ K(a+b,-b,c)`, that the
//! regressions of `U` and `1/U` on `V` are constant, and that the Laplace
//! transform identities and ODEs behind the regression characterization hold.

pub mod distributions;
pub mod error;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use distributions::{
    Beta, BetaParams, Gamma, GammaParams, Kummer, KummerParams, KummerSampler, RngStream,
};
pub use error::{Error, Result};
pub use specfun::{Integral, QuadratureConfig};
pub use transform::{PairSample, RegressionConstants};

