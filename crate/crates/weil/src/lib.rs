//! Weil pairing checks on `y^2 = x^3 - x` over small finite fields:
//! alternation, bilinearity, Frobenius equivariance, adjointness of the
//! CM endomorphisms and compatibility between torsion levels.

pub mod curve;
pub mod error;
pub mod field;
pub mod pairing;
pub mod search;

pub use curve::{CMEndomorphism, Curve, CurvePoint};
pub use error::{Result, WeilError};
pub use field::{Field, FiniteFieldElement};
pub use pairing::{cm_adjointness, level_compatibility, miller_pairing, torsion_grid, GridReport};
pub use search::{find_torsion_field, parse_fixtures, write_fixture, SearchSpec, TorsionFixture};
