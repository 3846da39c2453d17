//! Trace events and the JSON Lines trace format.
//!
//! One event per line, with the kind in field `t`:
//!
//! ```text
//! {"seq":1,"t":"activate","control":"save"}
//! {"seq":2,"t":"resize","width":320}
//! {"seq":3,"t":"drag_add","source":{"kind":"menu_item","path":["Format","Bold"],"action":"fmt.bold"},"position":1}
//! ```

use serde::{Deserialize, Serialize};

use crate::chain::OptionId;
use crate::customize::DragSource;
use crate::error::{Error, Result};
use crate::ids::{ControlId, ToolbarId, UserId};
use crate::toolbar::Units;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "snake_case")]
pub enum EventKind {
    Activate {
        control: ControlId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        toolbar: Option<ToolbarId>,
    },
    PointerMove {
        distance: Units,
    },
    Tick {
        ms: u64,
    },
    Resize {
        width: Units,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        toolbar: Option<ToolbarId>,
    },
    SetContext {
        module: String,
    },
    DragAdd {
        source: DragSource,
        position: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        toolbar: Option<ToolbarId>,
    },
    RemoveControl {
        id: ControlId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        toolbar: Option<ToolbarId>,
    },
    QcToggle {
        id: ControlId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        toolbar: Option<ToolbarId>,
    },
    StackSelect {
        toolbar: ToolbarId,
    },
    DragBoundary {
        boundary: usize,
        delta: i64,
    },
    ChainSet {
        position: usize,
        option: OptionId,
    },
    ChainClearAll,
    ToggleHighlight,
    SwitchUser {
        user: UserId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub seq: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl TraceEvent {
    pub fn new(seq: u64, kind: EventKind) -> Self {
        TraceEvent { seq, kind }
    }

    pub fn parse_line(line: &str, line_no: usize) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::TraceParse { line: line_no, message: e.to_string() })
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("trace events serialize")
    }
}

/// Parses a JSON Lines trace. Blank lines are skipped; sequence numbers
/// must be strictly increasing.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>> {
    let mut events: Vec<TraceEvent> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let ev = TraceEvent::parse_line(line, i + 1)?;
        if let Some(prev) = events.last() {
            if ev.seq <= prev.seq {
                return Err(Error::TraceParse {
                    line: i + 1,
                    message: format!("seq {} does not follow {}", ev.seq, prev.seq),
                });
            }
        }
        events.push(ev);
    }
    Ok(events)
}

pub fn write_trace(events: &[TraceEvent]) -> String {
    events.iter().map(|e| e.to_line() + "\n").collect()
}
