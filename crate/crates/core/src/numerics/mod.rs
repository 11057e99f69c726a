//! Shared numerical kernels: dense complex linear algebra, special
//! functions, adaptive quadrature, bracketed root finding and reproducible
//! random streams.

pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod roots;
pub mod special;

pub use linalg::{hermitian_eig, CMatrix, CVector, HermitianEigen, HermitianMatrix};
pub use quadrature::{gauss_legendre, gauss_legendre_with_cap, DEFAULT_PANEL_CAP};
pub use rng::RngStream;
pub use roots::find_root_increasing;
pub use special::{cin, cosine_integral, sine_integral};
