//! p-adic toolkit for Lubin-Tate formal groups, Coleman power series and
//! one-variable Iwasawa-algebra calculus.

pub mod coleman;
pub mod error;
pub mod iwasawa;
pub mod localfield;
pub mod lubin_tate;
pub mod padic;
pub mod ring;
pub mod series;

pub use coleman::ColemanData;
pub use error::{Error, Result};
pub use iwasawa::IwasawaElement;
pub use localfield::{ExtElement, ExtFraction, ExtKind, LocalRing};
pub use lubin_tate::{ClosedForm, FormalGroupLaw, LTIsomorphism, TorsionTower};
pub use padic::{PAdicConfig, PAdicFraction, PAdicInt};
pub use ring::{BaseRing, Coefficient};
pub use series::TruncatedSeries;
