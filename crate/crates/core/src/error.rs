use thiserror::Error;

use crate::monodromy::EngineError;
use crate::paths::PathError;
use crate::perm::PermError;
use crate::radical::ExprError;
use crate::witness::WitnessError;

/// Any failure surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
