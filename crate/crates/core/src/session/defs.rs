//! The session definition document: toolbars plus the optional stack,
//! slide panel, section row, palettes and procedural chain.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::chain::OptionTable;
use crate::error::{Error, Result};
use crate::ids::{ControlId, ToolbarId};
use crate::toolbar::{ToolbarDef, Units};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackDef {
    pub members: Vec<ToolbarId>,
    #[serde(default)]
    pub selected: Option<ToolbarId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SlidePanelDef {
    pub proximity_radius: Units,
    pub duration_ms: u64,
}

impl Default for SlidePanelDef {
    fn default() -> Self {
        SlidePanelDef { proximity_radius: 24, duration_ms: 150 }
    }
}

/// A composite row. When `toolbars` is non-empty it names one toolbar per
/// section, and each of those toolbars is fitted to its section's width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionsDef {
    pub widths: Vec<Units>,
    #[serde(default)]
    pub toolbars: Vec<ToolbarId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalettesDef {
    #[serde(rename = "static")]
    pub static_palette: BTreeSet<ControlId>,
    pub registry: BTreeMap<String, BTreeSet<ControlId>>,
    pub initial_context: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDef {
    pub context: String,
    /// Number of selection controls in the chain.
    pub length: usize,
    pub options: OptionTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionDefs {
    /// The first toolbar is the primary one: window resizes apply to it and
    /// events that omit a toolbar default to it.
    pub toolbars: Vec<ToolbarDef>,
    #[serde(default)]
    pub stack: Option<StackDef>,
    #[serde(default)]
    pub slide_panel: SlidePanelDef,
    #[serde(default)]
    pub sections: Option<SectionsDef>,
    #[serde(default)]
    pub palettes: Option<PalettesDef>,
    #[serde(default)]
    pub chain: Option<ChainDef>,
}

impl SessionDefs {
    pub fn from_json(text: &str) -> Result<Self> {
        let defs: SessionDefs =
            serde_json::from_str(text).map_err(|e| Error::InvalidDefinition(e.to_string()))?;
        defs.validated()
    }

    pub fn validated(mut self) -> Result<Self> {
        if self.toolbars.is_empty() {
            return Err(Error::InvalidDefinition("at least one toolbar is required".into()));
        }
        self.toolbars = self.toolbars.into_iter().map(ToolbarDef::validated).collect::<Result<_>>()?;
        let mut ids = BTreeSet::new();
        for t in &self.toolbars {
            if !ids.insert(t.toolbar_id.clone()) {
                return Err(Error::InvalidDefinition(format!("toolbar {} defined twice", t.toolbar_id)));
            }
        }
        let known = |id: &ToolbarId| -> Result<()> {
            if ids.contains(id) {
                Ok(())
            } else {
                Err(Error::UnknownToolbar(id.clone()))
            }
        };
        if let Some(stack) = &self.stack {
            stack.members.iter().try_for_each(known)?;
            if let Some(sel) = &stack.selected {
                if !stack.members.contains(sel) {
                    return Err(Error::UnknownToolbar(sel.clone()));
                }
            }
        }
        if let Some(sections) = &self.sections {
            if !sections.toolbars.is_empty() && sections.toolbars.len() != sections.widths.len() {
                return Err(Error::InvalidDefinition(
                    "sections.toolbars must name one toolbar per section".into(),
                ));
            }
            sections.toolbars.iter().try_for_each(known)?;
        }
        if let Some(p) = &self.palettes {
            if !p.registry.contains_key(&p.initial_context) {
                return Err(Error::UnknownContext(p.initial_context.clone()));
            }
        }
        if self.slide_panel.duration_ms == 0 {
            return Err(Error::InvalidDefinition("slide_panel.duration_ms must be positive".into()));
        }
        Ok(self)
    }

    pub fn primary_mut(&mut self) -> &mut ToolbarDef {
        &mut self.toolbars[0]
    }
}
