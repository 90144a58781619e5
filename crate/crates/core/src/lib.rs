//! Fail-fast validation of dynamically-typed values.
//!
//! Values are modelled by [`Value`]. Checks come in two flavours:
//!
//! * structured checks in [`engine`], configured with specs such as
//!   [`VectorSpec`](engine::VectorSpec);
//! * the compact rule language in [`dsl`], e.g. `"N+[0,]"` for a non-empty
//!   numeric vector without missing values and no element below 0.
//!
//! [`api`] lifts any check into the `check`/`test`/`assert`/`expect`
//! calling conventions.
//!
//! ```
//! use vetgate::{qassert, qtest, Value};
//!
//! let ages = Value::int([30, 41]);
//! assert!(qtest(&ages, "I+[0,]").unwrap());
//! let err = qassert(&Value::float([Some(1.0), None]), "N+").unwrap_err();
//! assert_eq!(
//!     err.to_string(),
//!     "Assertion on 'x' failed: Must not contain missing values, but found NA (element 2)"
//! );
//! ```

pub mod api;
pub mod bench;
pub mod cli;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod ingest;
pub mod schema;
pub mod value;

pub use dsl::{parse_rule, qassert, qassert_named, qcheck, qtest, rule_to_spec, ParseError, Rule};
pub use engine::{check_vector, CheckOutcome, VectorSpec};
pub use error::{Error, UsageError, ValidationError};
pub use value::{TypeSet, TypeTag, Value};
