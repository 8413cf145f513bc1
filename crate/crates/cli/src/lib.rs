//! Pipeline orchestration for the ranking engine.
//!
//! The library half of the `ragrank` binary: run configuration, the file
//! formats that connect pipeline stages (documented in `formats.md` at the
//! repository root), the chat-completion judge client, prompt templating,
//! the sampling-ablation driver, and one module per subcommand. Everything
//! here is deterministic given a config and a seed; the only nondeterminism
//! a run can contain comes in through the judge endpoint's replies.

pub mod ablate;
pub mod commands;
pub mod config;
pub mod io;
pub mod judge;
pub mod meta;
pub mod template;

pub use ablate::{ablate_sampling, SamplingAblation, SamplingCell};
pub use config::{EndpointConfig, Paths, RunConfig, SubsetSpec, TournamentKnobs};
pub use io::{FeatureFile, JudgmentRow, MissingCellRow, RejectRow};
pub use judge::{JudgeClient, JudgeError};
pub use meta::{RngStream, RunMeta};
pub use template::{render_prompt, render_documents, TemplateError, DEFAULT_TEMPLATE};
