//! Fitting ranked controls into the available width.
//!
//! Selection is greedy in rank order with skipping: a control that does not
//! fit is passed over and smaller, lower-ranked controls may still be
//! admitted. The most recently activated control can be forced onto the bar
//! ahead of the scan. Everything not admitted (and not hidden by the user)
//! lands in the drop-off well in rank order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ids::ControlId;
use crate::priority::{self, UsageProfile};
use crate::toolbar::{effective_width, ControlSpec, DisplayMode, PlacementPolicy, ToolbarDef, Units};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayedControl {
    pub id: ControlId,
    pub x: Units,
    pub width: Units,
}

impl DisplayedControl {
    pub fn end(&self) -> Units {
        self.x + self.width
    }

    pub fn contains(&self, x: Units) -> bool {
        self.x <= x && x < self.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ToolbarLayout {
    pub displayed: Vec<DisplayedControl>,
    /// Overflow controls in rank order.
    pub well: Vec<ControlId>,
    pub user_hidden: BTreeSet<ControlId>,
    pub available_width: Units,
}

impl ToolbarLayout {
    pub fn displayed_ids(&self) -> BTreeSet<ControlId> {
        self.displayed.iter().map(|d| d.id.clone()).collect()
    }

    pub fn is_displayed(&self, id: &str) -> bool {
        self.displayed.iter().any(|d| d.id.as_str() == id)
    }

    pub fn in_well(&self, id: &str) -> bool {
        self.well.iter().any(|w| w.as_str() == id)
    }

    /// Total width occupied, spacing included.
    pub fn used_width(&self) -> Units {
        self.displayed.last().map_or(0, DisplayedControl::end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayoutEvent {
    DisplayedSetChanged {
        added: BTreeSet<ControlId>,
        removed: BTreeSet<ControlId>,
    },
    NoChange,
}

impl LayoutEvent {
    pub fn between(before: &ToolbarLayout, after: &ToolbarLayout) -> Self {
        let (b, a) = (before.displayed_ids(), after.displayed_ids());
        if a == b {
            return LayoutEvent::NoChange;
        }
        LayoutEvent::DisplayedSetChanged {
            added: a.difference(&b).cloned().collect(),
            removed: b.difference(&a).cloned().collect(),
        }
    }

    pub fn is_change(&self) -> bool {
        matches!(self, LayoutEvent::DisplayedSetChanged { .. })
    }
}

/// A control offered to [`fit`], in rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub id: ControlId,
    pub width: Units,
    /// Left-to-right slot used by [`PlacementPolicy::StableOrder`].
    pub definition_index: usize,
}

impl Candidate {
    pub fn of(spec: &ControlSpec, mode: DisplayMode) -> Self {
        Candidate { id: spec.id.clone(), width: effective_width(spec, mode), definition_index: spec.definition_index }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitParams<'a> {
    pub available_width: Units,
    pub spacing: Units,
    pub forced: Option<&'a ControlId>,
    pub policy: PlacementPolicy,
}

/// Chooses the displayed controls and the well from `ranked`.
///
/// The returned layout has an empty `user_hidden` set; callers that hide
/// controls simply leave them out of `ranked`. A forced id that is not among
/// the candidates is ignored.
pub fn fit(ranked: &[Candidate], params: &FitParams<'_>) -> ToolbarLayout {
    let avail = u64::from(params.available_width);
    let spacing = u64::from(params.spacing);
    let mut used = 0u64;
    let mut admitted: Vec<usize> = Vec::with_capacity(ranked.len());
    let mut try_admit = |i: usize| {
        let gap = if admitted.is_empty() { 0 } else { spacing };
        let need = used + gap + u64::from(ranked[i].width);
        if need <= avail {
            used = need;
            admitted.push(i);
        }
    };

    let forced = params.forced.and_then(|f| ranked.iter().position(|c| c.id == *f));
    if let Some(f) = forced {
        try_admit(f);
    }
    for i in 0..ranked.len() {
        if Some(i) != forced {
            try_admit(i);
        }
    }

    let mut well = Vec::with_capacity(ranked.len() - admitted.len());
    let mut sorted = admitted.clone();
    sorted.sort_unstable();
    let mut next = sorted.iter().peekable();
    for (i, c) in ranked.iter().enumerate() {
        if next.peek() == Some(&&i) {
            next.next();
        } else {
            well.push(c.id.clone());
        }
    }

    let order = match params.policy {
        PlacementPolicy::StableOrder => {
            sorted.sort_by_key(|&i| ranked[i].definition_index);
            sorted
        }
        PlacementPolicy::PriorityOrder => sorted,
    };
    let mut x = 0;
    let mut displayed = Vec::with_capacity(order.len());
    for (k, &i) in order.iter().enumerate() {
        if k > 0 {
            x += params.spacing;
        }
        displayed.push(DisplayedControl { id: ranked[i].id.clone(), x, width: ranked[i].width });
        x += ranked[i].width;
    }

    ToolbarLayout { displayed, well, user_hidden: BTreeSet::new(), available_width: params.available_width }
}

/// Returns the label of the control under `x` when labels are not already
/// drawn next to the icons.
pub fn hover_hint<'a>(
    layout: &ToolbarLayout,
    mode: DisplayMode,
    x: Units,
    labels: &'a BTreeMap<ControlId, String>,
) -> Option<&'a str> {
    if mode == DisplayMode::IconLabelRight {
        return None;
    }
    let hit = layout.displayed.iter().find(|d| d.contains(x))?;
    labels.get(&hit.id).map(String::as_str)
}

/// A toolbar definition plus the mutable state the engine keeps for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToolbarState {
    pub def: ToolbarDef,
    pub user_hidden: BTreeSet<ControlId>,
    /// Most recently activated visible control, as of the last refit.
    pub forced: Option<ControlId>,
    pub layout: ToolbarLayout,
}

impl ToolbarState {
    pub fn new(def: ToolbarDef, profile: &UsageProfile) -> Self {
        let mut state = ToolbarState {
            def,
            user_hidden: BTreeSet::new(),
            forced: None,
            layout: ToolbarLayout::default(),
        };
        state.refit(profile);
        state
    }

    pub fn labels(&self) -> BTreeMap<ControlId, String> {
        self.def.controls.iter().map(|c| (c.id.clone(), c.label.clone())).collect()
    }

    /// Recomputes the layout and reports how the displayed set moved.
    ///
    /// The candidate with the latest activation in `profile` is forced onto
    /// the bar ahead of the priority scan.
    pub fn refit(&mut self, profile: &UsageProfile) -> LayoutEvent {
        let visible = self.def.controls.iter().filter(|c| !self.user_hidden.contains(&c.id));
        self.forced = visible
            .clone()
            .filter_map(|c| profile.last_used.get(&c.id).map(|seq| (*seq, &c.id)))
            .max()
            .map(|(_, id)| id.clone());
        let mode = self.def.config.display_mode;
        let ranked: Vec<Candidate> = priority::rank_specs(profile, visible, self.def.config.alpha)
            .into_iter()
            .map(|c| Candidate::of(c, mode))
            .collect();
        let params = FitParams {
            available_width: self.def.config.available_width,
            spacing: self.def.config.spacing,
            forced: self.forced.as_ref(),
            policy: self.def.config.placement_policy,
        };
        let mut layout = fit(&ranked, &params);
        layout.user_hidden = self
            .user_hidden
            .iter()
            .filter(|id| self.def.contains(id.as_str()))
            .cloned()
            .collect();
        let event = LayoutEvent::between(&self.layout, &layout);
        self.layout = layout;
        event
    }

    pub fn apply_resize(&mut self, profile: &UsageProfile, new_width: Units) -> (ToolbarLayout, LayoutEvent) {
        self.def.config.available_width = new_width;
        let event = self.refit(profile);
        (self.layout.clone(), event)
    }

    pub fn hover_hint(&self, x: Units) -> Option<String> {
        hover_hint(&self.layout, self.def.config.display_mode, x, &self.labels()).map(str::to_string)
    }
}
