//! Step-driven state machines: the proximity slide-out panel, the toolbar
//! stack, and the composite section row.
//!
//! No machine reads a clock. Time advances only through explicit ticks, and
//! animation or sound is reported as event records for the UI to act on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::ToolbarId;
use crate::rational::Rational;
use crate::toolbar::Units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlideTarget {
    Hidden,
    Visible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "snake_case")]
pub enum SlideInput {
    PointerAt { distance: Units },
    Tick { dt_ms: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlideEvent {
    BecameVisible,
    BecameHidden,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlidePanel {
    /// 0 is fully hidden, 1 fully slid out.
    pub progress: Rational,
    pub target: SlideTarget,
    pub proximity_radius: Units,
    pub duration_ms: u64,
}

impl Default for SlidePanel {
    fn default() -> Self {
        SlidePanel::new(24, 150).expect("non-zero default duration")
    }
}

impl SlidePanel {
    pub fn new(proximity_radius: Units, duration_ms: u64) -> Result<Self> {
        if duration_ms == 0 {
            return Err(Error::InvalidDefinition("slide duration_ms must be positive".into()));
        }
        Ok(SlidePanel {
            progress: Rational::ZERO,
            target: SlideTarget::Hidden,
            proximity_radius,
            duration_ms,
        })
    }

    pub fn is_visible(&self) -> bool {
        self.progress == Rational::ONE
    }

    pub fn step(&mut self, input: SlideInput) -> Option<SlideEvent> {
        match input {
            SlideInput::PointerAt { distance } => {
                self.target = if distance <= self.proximity_radius {
                    SlideTarget::Visible
                } else {
                    SlideTarget::Hidden
                };
                None
            }
            SlideInput::Tick { dt_ms } => {
                let duration = self.duration_ms as i64;
                let step = Rational::new(dt_ms.min(self.duration_ms) as i64, duration);
                let before = self.progress;
                match self.target {
                    SlideTarget::Visible => {
                        self.progress = (before + step).clamp_unit();
                        (self.progress == Rational::ONE && before < Rational::ONE)
                            .then_some(SlideEvent::BecameVisible)
                    }
                    SlideTarget::Hidden => {
                        self.progress = (before - step).clamp_unit();
                        (self.progress == Rational::ZERO && before > Rational::ZERO)
                            .then_some(SlideEvent::BecameHidden)
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Open,
    Close,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "snake_case")]
pub enum StackEvent {
    AnimateSlide { toolbar: ToolbarId, direction: Direction },
    Sound { direction: Direction },
}

/// Toolbars sharing one screen area; the selected one covers the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ToolbarStack {
    pub members: Vec<ToolbarId>,
    #[serde(default)]
    pub selected: Option<ToolbarId>,
}

impl ToolbarStack {
    pub fn new(members: Vec<ToolbarId>, selected: Option<ToolbarId>) -> Result<Self> {
        if let Some(s) = &selected {
            if !members.contains(s) {
                return Err(Error::UnknownToolbar(s.clone()));
            }
        }
        Ok(ToolbarStack { members, selected })
    }

    pub fn select(&mut self, id: &ToolbarId) -> Result<Vec<StackEvent>> {
        if !self.members.contains(id) {
            return Err(Error::UnknownToolbar(id.clone()));
        }
        if self.selected.as_ref() == Some(id) {
            return Ok(Vec::new());
        }
        let mut events = Vec::with_capacity(4);
        if let Some(prev) = self.selected.take() {
            events.push(StackEvent::AnimateSlide { toolbar: prev, direction: Direction::Close });
            events.push(StackEvent::Sound { direction: Direction::Close });
        }
        events.push(StackEvent::AnimateSlide { toolbar: id.clone(), direction: Direction::Open });
        events.push(StackEvent::Sound { direction: Direction::Open });
        self.selected = Some(id.clone());
        Ok(events)
    }
}

/// Width-sharing sections of a composite toolbar.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SectionRow {
    pub total_width: Units,
    pub widths: Vec<Units>,
}

impl SectionRow {
    pub fn new(widths: Vec<Units>) -> Self {
        SectionRow { total_width: widths.iter().sum(), widths }
    }

    /// Moves the boundary between sections `boundary` and `boundary + 1`.
    /// A positive delta grows the left section into its right neighbour;
    /// the move is clamped so neither goes below zero. Returns the applied
    /// delta.
    pub fn drag_boundary(&mut self, boundary: usize, delta: i64) -> Result<i64> {
        if boundary + 1 >= self.widths.len() {
            return Err(Error::BadBoundary { boundary, sections: self.widths.len() });
        }
        let left = i64::from(self.widths[boundary]);
        let right = i64::from(self.widths[boundary + 1]);
        let d = delta.clamp(-left, right);
        self.widths[boundary] = (left + d) as Units;
        self.widths[boundary + 1] = (right - d) as Units;
        Ok(d)
    }

    pub fn is_conserved(&self) -> bool {
        self.widths.iter().map(|&w| u64::from(w)).sum::<u64>() == u64::from(self.total_width)
    }
}
