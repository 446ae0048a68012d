//! Exact minimum-weight triangulation (MWT) of planar point sets.
//!
//! The pipeline combines three classic ingredients into one engine:
//!
//! 1. a candidate filter that keeps exactly the edges satisfying the
//!    diamond property, accelerated by dead-sector pruned incremental
//!    nearest-neighbor searches over a quadtree ([`diamond`], [`spatial`]),
//! 2. the LMT-skeleton heuristic (plus its stricter refinement) over a
//!    compact CSR half-edge graph ([`halfedge`], [`lmt`]), optionally run
//!    in parallel over a recursive vertex-range partition ([`partition`]),
//! 3. dynamic-programming completion of the remaining simple polygon
//!    faces ([`polygon`]).
//!
//! [`pipeline`] orchestrates the stages and [`io`] provides file formats
//! (TSPLIB / plain xy ingestion, edge lists, stats CSV, SVG rendering).

pub mod diamond;
pub mod geom;
pub mod halfedge;
pub mod io;
pub mod lmt;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod polygon;
pub mod spatial;

pub use geom::{BaseAngleConfig, Orientation, Point};

use thiserror::Error;

/// Errors surfaced by ingestion and the pipeline stages.
#[derive(Debug, Error)]
pub enum MwtError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("duplicate point ({x}, {y}) at input line {line}")]
    DuplicatePoint { x: f64, y: f64, line: usize },
    #[error("non-finite coordinate at input line {0}")]
    NonFiniteCoordinate(usize),
    #[error("all points are collinear; no triangulation exists")]
    AllCollinear,
    #[error("empty candidate edge set")]
    EmptyEdgeSet,
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("face triangulation infeasible (upstream soundness bug): {0}")]
    DpInfeasible(String),
    #[error("empty edge set, nothing to render")]
    NothingToRender,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MwtError>;
