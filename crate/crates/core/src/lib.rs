//! Headless adaptive-toolbar engine.
//!
//! Controls are ranked by a per-user priority (pre-assigned weight plus
//! usage), fitted greedily into the available width with overflow going to
//! a drop-off well, and reshuffled as the window, the user's habits, or the
//! user's customizations change. Interaction machines (slide-out panel,
//! toolbar stack, composite sections) and the procedural selection chain
//! run as pure step functions so that whole sessions replay deterministically
//! from a trace.

pub mod chain;
pub mod customize;
pub mod error;
pub mod ids;
pub mod layout;
pub mod machines;
pub mod priority;
pub mod rational;
pub mod session;
pub mod toolbar;

pub use chain::{ChainState, OptionProvider, OptionTable};
pub use customize::{drag_add, qc_toggle, remove_control, DragSource, PaletteSet, QcEntry};
pub use error::{Error, Result};
pub use ids::{ActionId, ControlId, ToolbarId, UserId};
pub use layout::{fit, hover_hint, Candidate, FitParams, LayoutEvent, ToolbarLayout, ToolbarState};
pub use machines::{Direction, SectionRow, SlideEvent, SlideInput, SlidePanel, SlideTarget, StackEvent, ToolbarStack};
pub use priority::{rank, rank_specs, score, PriorityScore, UsageProfile};
pub use rational::Rational;
pub use session::defs::SessionDefs;
pub use session::profiles::{load_profile, save_profile, ProfileStore};
pub use session::trace::{parse_trace, EventKind, TraceEvent};
pub use session::{replay_trace, Metrics, Session, SessionSnapshot};
pub use toolbar::{effective_width, init_toolbar, ControlSpec, DisplayMode, PlacementPolicy, ToolbarConfig, ToolbarDef, Units};
