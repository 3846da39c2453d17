//! Trace replay, metrics and snapshots: the engine as one state value that
//! folds trace events.

pub mod canonical;
pub mod defs;
pub mod profiles;
pub mod trace;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainState, OptionId};
use crate::customize::{self, DragSource, PaletteSet, QcEntry};
use crate::error::{Error, Result};
use crate::ids::{ActionId, ControlId, ToolbarId, UserId};
use crate::layout::{LayoutEvent, ToolbarLayout, ToolbarState};
use crate::machines::{SectionRow, SlideEvent, SlideInput, SlidePanel, StackEvent, ToolbarStack};
use crate::priority::UsageProfile;
use crate::toolbar::{DisplayMode, Units};

use self::defs::SessionDefs;
use self::profiles::ProfileStore;
use self::trace::{EventKind, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metrics {
    /// Refits whose displayed set changed.
    pub churn: u64,
    pub well_activations: u64,
    pub bar_activations: u64,
    /// Menu levels skipped by activating menu-derived controls from the bar.
    pub clicks_saved: u64,
    pub disabled_activations: u64,
}

impl Metrics {
    pub fn activations(&self) -> u64 {
        self.well_activations + self.bar_activations + self.disabled_activations
    }
}

/// Something the engine did that the UI may want to animate or echo.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "snake_case")]
pub enum EngineEvent {
    Dispatched { toolbar: ToolbarId, control: ControlId, action: ActionId },
    LayoutChanged { toolbar: ToolbarId, added: BTreeSet<ControlId>, removed: BTreeSet<ControlId> },
    Slide { event: SlideEvent },
    Stack { event: StackEvent },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub seq: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolbarSnapshot {
    pub toolbar_id: ToolbarId,
    pub display_mode: DisplayMode,
    pub layout: ToolbarLayout,
    pub qc: Vec<QcEntry>,
    pub mru: Option<ControlId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionsSnapshot {
    pub row: SectionRow,
    pub toolbars: Vec<ToolbarId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSnapshot {
    pub context: String,
    pub values: Vec<Option<OptionId>>,
    pub options: Vec<Vec<OptionId>>,
    pub highlight: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDigest {
    pub user_id: UserId,
    pub total_activations: u64,
    pub next_seq: u64,
    /// Hex SHA-256 of the profile's canonical JSON.
    pub sha256: String,
}

impl ProfileDigest {
    pub fn of(profile: &UsageProfile) -> Self {
        ProfileDigest {
            user_id: profile.user_id.clone(),
            total_activations: profile.total_activations(),
            next_seq: profile.next_seq,
            sha256: canonical::digest(profile),
        }
    }
}

/// Full observable engine state. Serialize with [`SessionSnapshot::to_canonical_json`]
/// for byte-stable output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSnapshot {
    /// Sequence number of the last event applied.
    pub seq: Option<u64>,
    pub toolbars: Vec<ToolbarSnapshot>,
    pub stack: Option<ToolbarStack>,
    pub slide_panel: SlidePanel,
    pub sections: Option<SectionsSnapshot>,
    pub palettes: Option<PaletteSet>,
    pub chain: Option<ChainSnapshot>,
    pub profile: ProfileDigest,
    pub metrics: Metrics,
    pub errors: Vec<ErrorRecord>,
    /// Events emitted while applying the last trace event.
    pub events: Vec<EngineEvent>,
}

impl SessionSnapshot {
    pub fn to_canonical_json(&self) -> String {
        canonical::to_canonical_string(self)
    }
}

#[derive(Debug, Clone)]
struct Sections {
    row: SectionRow,
    toolbars: Vec<ToolbarId>,
}

/// One live engine instance.
#[derive(Debug, Clone)]
pub struct Session {
    toolbars: Vec<ToolbarState>,
    stack: Option<ToolbarStack>,
    slide: SlidePanel,
    sections: Option<Sections>,
    palettes: Option<PaletteSet>,
    chain: Option<ChainState>,
    profiles: ProfileStore,
    user: UserId,
    metrics: Metrics,
    errors: Vec<ErrorRecord>,
    events: Vec<EngineEvent>,
    seq: Option<u64>,
}

impl Session {
    /// Builds the initial state. Fails only on invalid definitions or when
    /// the starting user's profile cannot be read.
    pub fn new(defs: SessionDefs, mut profiles: ProfileStore, user: UserId) -> Result<Self> {
        let mut defs = defs.validated()?;
        profiles.ensure_loaded(&user)?;

        let sections = match defs.sections.take() {
            Some(s) => {
                for (tid, w) in s.toolbars.iter().zip(&s.widths) {
                    let def = defs.toolbars.iter_mut().find(|t| &t.toolbar_id == tid).expect("validated");
                    def.config.available_width = *w;
                }
                Some(Sections { row: SectionRow::new(s.widths), toolbars: s.toolbars })
            }
            None => None,
        };
        let stack = defs.stack.take().map(|s| ToolbarStack::new(s.members, s.selected)).transpose()?;
        let slide = SlidePanel::new(defs.slide_panel.proximity_radius, defs.slide_panel.duration_ms)?;
        let palettes = defs
            .palettes
            .take()
            .map(|p| PaletteSet::new(p.static_palette, p.registry, &p.initial_context))
            .transpose()?;
        let chain = defs
            .chain
            .take()
            .map(|c| ChainState::uniform(c.context, Arc::new(c.options), c.length));

        let profile = profiles.get(&user).expect("loaded above");
        let toolbars = defs.toolbars.into_iter().map(|d| ToolbarState::new(d, profile)).collect();

        Ok(Session {
            toolbars,
            stack,
            slide,
            sections,
            palettes,
            chain,
            profiles,
            user,
            metrics: Metrics::default(),
            errors: Vec::new(),
            events: Vec::new(),
            seq: None,
        })
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn user(&self) -> &UserId {
        &self.user
    }

    pub fn profile(&self) -> &UsageProfile {
        self.profiles.get(&self.user).expect("current user is always loaded")
    }

    pub fn profiles(&self) -> &ProfileStore {
        &self.profiles
    }

    pub fn profiles_mut(&mut self) -> &mut ProfileStore {
        &mut self.profiles
    }

    pub fn into_profiles(self) -> ProfileStore {
        self.profiles
    }

    pub fn toolbars(&self) -> &[ToolbarState] {
        &self.toolbars
    }

    pub fn toolbar(&self, id: &str) -> Option<&ToolbarState> {
        self.toolbars.iter().find(|t| t.def.toolbar_id.as_str() == id)
    }

    pub fn chain(&self) -> Option<&ChainState> {
        self.chain.as_ref()
    }

    pub fn slide_panel(&self) -> &SlidePanel {
        &self.slide
    }

    pub fn section_row(&self) -> Option<&SectionRow> {
        self.sections.as_ref().map(|s| &s.row)
    }

    pub fn errors(&self) -> &[ErrorRecord] {
        &self.errors
    }

    /// Applies one event. Ordinary failures are logged in the error list and
    /// leave the state as it was; only fatal errors (an unreadable profile,
    /// I/O, or a non-increasing `seq`) are returned.
    pub fn apply(&mut self, event: &TraceEvent) -> Result<()> {
        if let Some(prev) = self.seq {
            if event.seq <= prev {
                return Err(Error::SeqOrder { seq: event.seq, previous: prev });
            }
        }
        self.events.clear();
        let checkpoint = self.clone();
        match self.apply_kind(&event.kind) {
            Ok(()) => {}
            Err(e) if e.is_fatal() => {
                *self = checkpoint;
                return Err(e);
            }
            Err(e) => {
                *self = checkpoint;
                self.errors.push(ErrorRecord { seq: event.seq, message: e.to_string() });
            }
        }
        self.seq = Some(event.seq);
        Ok(())
    }

    fn toolbar_index(&self, id: Option<&ToolbarId>) -> Result<usize> {
        match id {
            None => Ok(0),
            Some(id) => self
                .toolbars
                .iter()
                .position(|t| &t.def.toolbar_id == id)
                .ok_or_else(|| Error::UnknownToolbar(id.clone())),
        }
    }

    fn refit_one(&mut self, index: usize) {
        let profile = self.profiles.get(&self.user).expect("current user is always loaded");
        let state = &mut self.toolbars[index];
        if let LayoutEvent::DisplayedSetChanged { added, removed } = state.refit(profile) {
            self.metrics.churn += 1;
            self.events.push(EngineEvent::LayoutChanged {
                toolbar: state.def.toolbar_id.clone(),
                added,
                removed,
            });
        }
    }

    fn refit_all(&mut self) {
        for i in 0..self.toolbars.len() {
            self.refit_one(i);
        }
    }

    fn apply_kind(&mut self, kind: &EventKind) -> Result<()> {
        match kind {
            EventKind::Activate { control, toolbar } => self.activate(control, toolbar.as_ref()),
            EventKind::PointerMove { distance } => {
                self.slide_input(SlideInput::PointerAt { distance: *distance });
                Ok(())
            }
            EventKind::Tick { ms } => {
                self.slide_input(SlideInput::Tick { dt_ms: *ms });
                Ok(())
            }
            EventKind::Resize { width, toolbar } => {
                let i = self.toolbar_index(toolbar.as_ref())?;
                self.toolbars[i].def.config.available_width = *width;
                self.refit_one(i);
                Ok(())
            }
            EventKind::SetContext { module } => self.set_context(module),
            EventKind::DragAdd { source, position, toolbar } => self.drag_add(source, *position, toolbar.as_ref()),
            EventKind::RemoveControl { id, toolbar } => {
                let i = self.toolbar_index(toolbar.as_ref())?;
                let state = &mut self.toolbars[i];
                state.def = customize::remove_control(state.def.clone(), id.as_str())?;
                state.user_hidden.remove(id);
                self.refit_one(i);
                Ok(())
            }
            EventKind::QcToggle { id, toolbar } => {
                let i = self.toolbar_index(toolbar.as_ref())?;
                let profile = self.profiles.get(&self.user).expect("current user is always loaded");
                let state = &mut self.toolbars[i];
                let (_, event) = customize::qc_toggle(state, profile, id.as_str())?;
                if let LayoutEvent::DisplayedSetChanged { added, removed } = event {
                    self.metrics.churn += 1;
                    let toolbar = state.def.toolbar_id.clone();
                    self.events.push(EngineEvent::LayoutChanged { toolbar, added, removed });
                }
                Ok(())
            }
            EventKind::StackSelect { toolbar } => {
                let stack = self.stack.as_mut().ok_or(Error::NotConfigured("toolbar stack"))?;
                let events = stack.select(toolbar)?;
                self.events.extend(events.into_iter().map(|event| EngineEvent::Stack { event }));
                Ok(())
            }
            EventKind::DragBoundary { boundary, delta } => self.drag_boundary(*boundary, *delta),
            EventKind::ChainSet { position, option } => {
                let chain = self.chain.as_mut().ok_or(Error::NotConfigured("procedural chain"))?;
                chain.set_value(*position, option)?;
                Ok(())
            }
            EventKind::ChainClearAll => {
                self.chain.as_mut().ok_or(Error::NotConfigured("procedural chain"))?.clear_all();
                Ok(())
            }
            EventKind::ToggleHighlight => {
                self.chain.as_mut().ok_or(Error::NotConfigured("procedural chain"))?.toggle_highlight();
                Ok(())
            }
            EventKind::SwitchUser { user } => {
                self.profiles.ensure_loaded(user)?;
                self.user = user.clone();
                self.refit_all();
                Ok(())
            }
        }
    }

    fn activate(&mut self, control: &ControlId, toolbar: Option<&ToolbarId>) -> Result<()> {
        let index = match toolbar {
            Some(_) => self.toolbar_index(toolbar)?,
            None => self
                .toolbars
                .iter()
                .position(|t| t.def.contains(control.as_str()))
                .ok_or_else(|| Error::UnknownControl(control.clone()))?,
        };
        let state = &self.toolbars[index];
        let spec = state.def.control(control.as_str()).ok_or_else(|| Error::UnknownControl(control.clone()))?;
        if !spec.enabled {
            self.metrics.disabled_activations += 1;
            return Ok(());
        }
        if state.layout.is_displayed(control.as_str()) {
            self.metrics.bar_activations += 1;
            self.metrics.clicks_saved += spec.menu_depth.map_or(0, |d| u64::from(d.saturating_sub(1)));
        } else {
            self.metrics.well_activations += 1;
        }
        self.events.push(EngineEvent::Dispatched {
            toolbar: state.def.toolbar_id.clone(),
            control: control.clone(),
            action: spec.action.clone(),
        });
        self.profiles
            .get_mut(&self.user)
            .expect("current user is always loaded")
            .record_activation(control);
        self.refit_all();
        Ok(())
    }

    fn slide_input(&mut self, input: SlideInput) {
        if let Some(event) = self.slide.step(input) {
            self.events.push(EngineEvent::Slide { event });
        }
    }

    fn set_context(&mut self, module: &str) -> Result<()> {
        if self.palettes.is_none() && self.chain.is_none() {
            return Err(Error::UnknownContext(module.to_string()));
        }
        if let Some(p) = &mut self.palettes {
            p.set_context(module)?;
        }
        if let Some(c) = &mut self.chain {
            c.set_context(module);
        }
        Ok(())
    }

    fn drag_add(&mut self, source: &DragSource, position: usize, toolbar: Option<&ToolbarId>) -> Result<()> {
        let i = self.toolbar_index(toolbar)?;
        let (def, _) = customize::drag_add(self.toolbars[i].def.clone(), source, position)?;
        self.toolbars[i].def = def;
        self.refit_one(i);
        Ok(())
    }

    fn drag_boundary(&mut self, boundary: usize, delta: i64) -> Result<()> {
        let sections = self.sections.as_mut().ok_or(Error::NotConfigured("section row"))?;
        sections.row.drag_boundary(boundary, delta)?;
        let bound: Vec<(ToolbarId, Units)> = sections
            .toolbars
            .iter()
            .zip(&sections.row.widths)
            .skip(boundary)
            .take(2)
            .map(|(t, w)| (t.clone(), *w))
            .collect();
        for (tid, width) in bound {
            let i = self.toolbar_index(Some(&tid))?;
            self.toolbars[i].def.config.available_width = width;
            self.refit_one(i);
        }
        Ok(())
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot {
            seq: self.seq,
            toolbars: self
                .toolbars
                .iter()
                .map(|t| ToolbarSnapshot {
                    toolbar_id: t.def.toolbar_id.clone(),
                    display_mode: t.def.config.display_mode,
                    layout: t.layout.clone(),
                    qc: customize::qc_entries(t),
                    mru: t.forced.clone(),
                })
                .collect(),
            stack: self.stack.clone(),
            slide_panel: self.slide.clone(),
            sections: self
                .sections
                .as_ref()
                .map(|s| SectionsSnapshot { row: s.row.clone(), toolbars: s.toolbars.clone() }),
            palettes: self.palettes.clone(),
            chain: self.chain.as_ref().map(|c| ChainSnapshot {
                context: c.context.clone(),
                values: c.values().to_vec(),
                options: (0..c.len()).map(|i| c.options(i).expect("in range").to_vec()).collect(),
                highlight: c.highlight,
            }),
            profile: ProfileDigest::of(self.profile()),
            metrics: self.metrics,
            errors: self.errors.clone(),
            events: self.events.clone(),
        }
    }
}

/// Folds a whole trace and returns the final snapshot together with the
/// profiles as they stand afterwards.
pub fn replay_trace(
    trace: &[TraceEvent],
    defs: SessionDefs,
    profiles: ProfileStore,
    user: UserId,
) -> Result<(SessionSnapshot, ProfileStore)> {
    let mut session = Session::new(defs, profiles, user)?;
    for event in trace {
        session.apply(event)?;
    }
    Ok((session.snapshot(), session.into_profiles()))
}
