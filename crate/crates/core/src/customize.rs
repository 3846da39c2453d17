//! User-driven reconfiguration: drag-and-drop button creation, removal, the
//! quick-customize menu, and the static/dynamic palette pair.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ActionId, ControlId};
use crate::layout::{LayoutEvent, ToolbarState};
use crate::priority::UsageProfile;
use crate::rational::Rational;
use crate::toolbar::{ControlSpec, ToolbarDef};

/// What was dropped onto the toolbar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DragSource {
    /// A pull-down menu leaf; `path` runs from the top-level menu to the leaf.
    MenuItem { path: Vec<String>, action: ActionId },
    /// An operation exposed by an on-screen object.
    ObjectOperation { action: ActionId, label: String },
}

impl DragSource {
    pub fn action(&self) -> &ActionId {
        match self {
            DragSource::MenuItem { action, .. } | DragSource::ObjectOperation { action, .. } => action,
        }
    }

    fn label(&self) -> String {
        match self {
            DragSource::MenuItem { path, .. } => path.last().cloned().unwrap_or_default(),
            DragSource::ObjectOperation { label, .. } => label.clone(),
        }
    }
}

/// Creates a control bound to the dropped action and inserts it at
/// `position` (clamped to the end). The new control's weight is the mean
/// base weight of the existing controls.
pub fn drag_add(mut def: ToolbarDef, source: &DragSource, position: usize) -> Result<(ToolbarDef, ControlId)> {
    if let DragSource::MenuItem { path, .. } = source {
        if path.is_empty() {
            return Err(Error::InvalidDefinition("menu item drag source has an empty path".into()));
        }
    }
    let action = source.action();
    if def.controls.iter().any(|c| &c.action == action) {
        return Err(Error::DuplicateAction(action.clone()));
    }

    let mut id = ControlId::new(action.as_str());
    let mut n = 2;
    while def.contains(id.as_str()) {
        id = ControlId::new(format!("{action}#{n}"));
        n += 1;
    }

    let base_weight = if def.controls.is_empty() {
        Rational::ONE
    } else {
        let sum = def.controls.iter().fold(Rational::ZERO, |acc, c| acc + c.base_weight);
        sum * Rational::new(1, def.controls.len() as i64)
    };

    let spec = ControlSpec {
        id: id.clone(),
        action: action.clone(),
        label: source.label(),
        icon_width: def.config.default_icon_width,
        label_width: def.config.default_label_width,
        base_weight,
        enabled: true,
        definition_index: 0,
        menu_depth: match source {
            DragSource::MenuItem { path, .. } => Some(path.len() as u32),
            DragSource::ObjectOperation { .. } => None,
        },
    };
    let at = position.min(def.controls.len());
    def.controls.insert(at, spec);
    def.reindex();
    Ok((def, id))
}

/// Removes a control. Usage history for it stays in the profiles.
pub fn remove_control(mut def: ToolbarDef, id: &str) -> Result<ToolbarDef> {
    let Some(at) = def.controls.iter().position(|c| c.id.as_str() == id) else {
        return Err(Error::UnknownControl(ControlId::new(id)));
    };
    def.controls.remove(at);
    def.reindex();
    Ok(def)
}

/// One row of the quick-customize menu.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcEntry {
    pub control: ControlId,
    pub label: String,
    pub selected: bool,
}

/// All registered controls, in definition order, with their show/hide flag.
pub fn qc_entries(state: &ToolbarState) -> Vec<QcEntry> {
    state
        .def
        .controls
        .iter()
        .map(|c| QcEntry {
            control: c.id.clone(),
            label: c.label.clone(),
            selected: !state.user_hidden.contains(&c.id),
        })
        .collect()
}

/// Flips a control between shown and user-hidden, then refits.
pub fn qc_toggle(state: &mut ToolbarState, profile: &UsageProfile, id: &str) -> Result<(Vec<QcEntry>, LayoutEvent)> {
    let Some(spec) = state.def.control(id) else {
        return Err(Error::UnknownControl(ControlId::new(id)));
    };
    let cid = spec.id.clone();
    if !state.user_hidden.remove(&cid) {
        state.user_hidden.insert(cid);
    }
    let event = state.refit(profile);
    Ok((qc_entries(state), event))
}

/// A fixed tool palette shown alongside one that follows the current module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteSet {
    pub static_palette: BTreeSet<ControlId>,
    pub dynamic_palette: BTreeSet<ControlId>,
    pub context_registry: BTreeMap<String, BTreeSet<ControlId>>,
    pub current_context: String,
}

impl PaletteSet {
    pub fn new(
        static_palette: BTreeSet<ControlId>,
        context_registry: BTreeMap<String, BTreeSet<ControlId>>,
        initial_context: &str,
    ) -> Result<Self> {
        let dynamic_palette = context_registry
            .get(initial_context)
            .cloned()
            .ok_or_else(|| Error::UnknownContext(initial_context.to_string()))?;
        Ok(PaletteSet {
            static_palette,
            dynamic_palette,
            context_registry,
            current_context: initial_context.to_string(),
        })
    }

    pub fn set_context(&mut self, module: &str) -> Result<()> {
        let palette = self
            .context_registry
            .get(module)
            .ok_or_else(|| Error::UnknownContext(module.to_string()))?;
        self.dynamic_palette = palette.clone();
        self.current_context = module.to_string();
        Ok(())
    }

    pub fn is_consistent(&self) -> bool {
        self.context_registry.get(&self.current_context) == Some(&self.dynamic_palette)
    }
}
