//! Controls, toolbars, display modes and width measurement.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ActionId, ControlId, ToolbarId};
use crate::layout::{self, Candidate, FitParams, ToolbarLayout};
use crate::priority::{self, UsageProfile};
use crate::rational::Rational;

/// Abstract, device-independent layout units.
pub type Units = u32;

/// Immutable description of one toolbar control.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlSpec {
    pub id: ControlId,
    pub action: ActionId,
    pub label: String,
    pub icon_width: Units,
    pub label_width: Units,
    /// Pre-assigned priority weight.
    pub base_weight: Rational,
    #[serde(default = "default_true")]
    pub enabled: bool,
    /// Assigned on registration; dense `0..n` in toolbar order.
    #[serde(default)]
    pub definition_index: usize,
    /// Depth of the menu path this control was dragged from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub menu_depth: Option<u32>,
}

fn default_true() -> bool {
    true
}

impl ControlSpec {
    pub fn new(id: impl Into<ControlId>, action: impl Into<ActionId>, label: impl Into<String>) -> Self {
        ControlSpec {
            id: id.into(),
            action: action.into(),
            label: label.into(),
            icon_width: 16,
            label_width: 48,
            base_weight: Rational::ONE,
            enabled: true,
            definition_index: 0,
            menu_depth: None,
        }
    }

    pub fn with_widths(mut self, icon_width: Units, label_width: Units) -> Self {
        self.icon_width = icon_width;
        self.label_width = label_width;
        self
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.base_weight = weight;
        self
    }

    pub fn disabled(mut self) -> Self {
        self.enabled = false;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisplayMode {
    IconOnly,
    #[default]
    IconLabelRight,
}

/// How admitted controls are ordered on the bar. Membership is always decided
/// by priority; this only affects left-to-right rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementPolicy {
    #[default]
    StableOrder,
    PriorityOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToolbarConfig {
    pub available_width: Units,
    pub spacing: Units,
    pub display_mode: DisplayMode,
    pub placement_policy: PlacementPolicy,
    /// Coefficient applied to activation counts when scoring.
    pub alpha: Rational,
    /// Widths given to controls created by drag-and-drop.
    pub default_icon_width: Units,
    pub default_label_width: Units,
}

impl Default for ToolbarConfig {
    fn default() -> Self {
        ToolbarConfig {
            available_width: 0,
            spacing: 4,
            display_mode: DisplayMode::default(),
            placement_policy: PlacementPolicy::default(),
            alpha: Rational::ONE,
            default_icon_width: 16,
            default_label_width: 48,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolbarDef {
    pub toolbar_id: ToolbarId,
    #[serde(default)]
    pub controls: Vec<ControlSpec>,
    #[serde(default)]
    pub config: ToolbarConfig,
}

impl ToolbarDef {
    pub fn new(toolbar_id: impl Into<ToolbarId>, config: ToolbarConfig) -> Self {
        ToolbarDef {
            toolbar_id: toolbar_id.into(),
            controls: Vec::new(),
            config,
        }
    }

    pub fn control(&self, id: &str) -> Option<&ControlSpec> {
        self.controls.iter().find(|c| c.id.as_str() == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.control(id).is_some()
    }

    /// Appends `spec` with the next definition index.
    pub fn register_control(mut self, mut spec: ControlSpec) -> Result<Self> {
        if self.contains(spec.id.as_str()) {
            return Err(Error::DuplicateControlId(spec.id));
        }
        spec.definition_index = self.controls.len();
        self.controls.push(spec);
        Ok(self)
    }

    pub(crate) fn reindex(&mut self) {
        for (i, c) in self.controls.iter_mut().enumerate() {
            c.definition_index = i;
        }
    }

    /// Checks the invariants of a definition loaded from outside (ids unique,
    /// weights and alpha non-negative) and renumbers definition indices.
    pub fn validated(mut self) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &self.controls {
            if !seen.insert(c.id.clone()) {
                return Err(Error::DuplicateControlId(c.id.clone()));
            }
            if c.base_weight.is_negative() {
                return Err(Error::InvalidDefinition(format!(
                    "control {} has negative base_weight {}",
                    c.id, c.base_weight
                )));
            }
        }
        if self.config.alpha.is_negative() {
            return Err(Error::InvalidDefinition(format!(
                "toolbar {} has negative alpha",
                self.toolbar_id
            )));
        }
        self.reindex();
        Ok(self)
    }

    pub fn control_ids(&self) -> Vec<ControlId> {
        self.controls.iter().map(|c| c.id.clone()).collect()
    }
}

pub fn effective_width(spec: &ControlSpec, mode: DisplayMode) -> Units {
    match mode {
        DisplayMode::IconOnly => spec.icon_width,
        DisplayMode::IconLabelRight => spec.icon_width.saturating_add(spec.label_width),
    }
}

/// First layout of a toolbar: rank every control, then fit.
///
/// With a zero-usage profile the ranking is base weight with definition-order
/// tie-break, so equal weights load in registration order.
pub fn init_toolbar(def: &ToolbarDef, profile: &UsageProfile) -> ToolbarLayout {
    let ranked: Vec<Candidate> = priority::rank_specs(profile, &def.controls, def.config.alpha)
        .into_iter()
        .map(|c| Candidate::of(c, def.config.display_mode))
        .collect();
    let params = FitParams {
        available_width: def.config.available_width,
        spacing: def.config.spacing,
        forced: None,
        policy: def.config.placement_policy,
    };
    layout::fit(&ranked, &params)
}
