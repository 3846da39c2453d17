//! The procedural toolbar: a left-to-right chain of selection controls.
//!
//! Each position's option list is produced from the value immediately to
//! its left. Any position may be re-set at any time; downstream values that
//! remain valid under the recomputed options are kept, the rest cleared.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type OptionId = String;

/// Supplies the options for one chain position.
///
/// Must be deterministic. Position 0 is called with `upstream = None`; the
/// chain never calls providers at later positions without an upstream value.
pub trait OptionProvider: Send + Sync {
    fn options(&self, context: &str, upstream: Option<&str>) -> Vec<OptionId>;
}

impl<F> OptionProvider for F
where
    F: Fn(&str, Option<&str>) -> Vec<OptionId> + Send + Sync,
{
    fn options(&self, context: &str, upstream: Option<&str>) -> Vec<OptionId> {
        self(context, upstream)
    }
}

/// Declarative provider: context → option → child options. The empty key
/// `""` holds the root options offered at position 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OptionTable(pub BTreeMap<String, BTreeMap<OptionId, Vec<OptionId>>>);

impl OptionProvider for OptionTable {
    fn options(&self, context: &str, upstream: Option<&str>) -> Vec<OptionId> {
        self.0
            .get(context)
            .and_then(|m| m.get(upstream.unwrap_or("")))
            .cloned()
            .unwrap_or_default()
    }
}

/// How a cascade treated downstream positions that held a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CascadeReport {
    pub retained: usize,
    pub cleared: usize,
}

#[derive(Clone, Serialize)]
pub struct ChainState {
    pub context: String,
    #[serde(skip)]
    providers: Vec<Arc<dyn OptionProvider>>,
    values: Vec<Option<OptionId>>,
    options: Vec<Vec<OptionId>>,
    pub highlight: bool,
}

impl fmt::Debug for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainState")
            .field("context", &self.context)
            .field("providers", &self.providers.len())
            .field("values", &self.values)
            .field("options", &self.options)
            .field("highlight", &self.highlight)
            .finish()
    }
}

impl PartialEq for ChainState {
    fn eq(&self, other: &Self) -> bool {
        self.context == other.context
            && self.values == other.values
            && self.options == other.options
            && self.highlight == other.highlight
            && self.providers.len() == other.providers.len()
    }
}

impl ChainState {
    pub fn new(context: impl Into<String>, providers: Vec<Arc<dyn OptionProvider>>) -> Self {
        let k = providers.len();
        let mut chain = ChainState {
            context: context.into(),
            providers,
            values: vec![None; k],
            options: vec![Vec::new(); k],
            highlight: false,
        };
        chain.cascade_from(0);
        chain
    }

    /// A chain of `len` positions all backed by the same provider.
    pub fn uniform(context: impl Into<String>, provider: Arc<dyn OptionProvider>, len: usize) -> Self {
        Self::new(context, vec![provider; len])
    }

    pub fn len(&self) -> usize {
        self.providers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.providers.is_empty()
    }

    pub fn values(&self) -> &[Option<OptionId>] {
        &self.values
    }

    fn check_position(&self, position: usize) -> Result<()> {
        if position >= self.len() {
            return Err(Error::BadPosition { position, len: self.len() });
        }
        Ok(())
    }

    pub fn options(&self, position: usize) -> Result<&[OptionId]> {
        self.check_position(position)?;
        Ok(&self.options[position])
    }

    fn compute_options(&self, position: usize) -> Vec<OptionId> {
        let provider = &self.providers[position];
        if position == 0 {
            return provider.options(&self.context, None);
        }
        match &self.values[position - 1] {
            Some(up) => provider.options(&self.context, Some(up)),
            None => Vec::new(),
        }
    }

    fn cascade_from(&mut self, start: usize) -> CascadeReport {
        let mut report = CascadeReport::default();
        for j in start..self.len() {
            self.options[j] = self.compute_options(j);
            if let Some(v) = &self.values[j] {
                if self.options[j].contains(v) {
                    report.retained += 1;
                } else {
                    self.values[j] = None;
                    report.cleared += 1;
                }
            }
        }
        report
    }

    /// Sets `option` at `position` and revalidates everything to its right.
    /// On error the chain is unchanged.
    pub fn set_value(&mut self, position: usize, option: &str) -> Result<CascadeReport> {
        self.check_position(position)?;
        if !self.options[position].iter().any(|o| o == option) {
            return Err(Error::InvalidOption { position, option: option.to_string() });
        }
        self.values[position] = Some(option.to_string());
        Ok(self.cascade_from(position + 1))
    }

    pub fn clear_all(&mut self) {
        self.values.iter_mut().for_each(|v| *v = None);
        self.cascade_from(0);
    }

    pub fn toggle_highlight(&mut self) {
        self.highlight = !self.highlight;
    }

    /// Switches context and re-runs the whole cascade under the
    /// retain-if-valid rule.
    pub fn set_context(&mut self, context: impl Into<String>) -> CascadeReport {
        self.context = context.into();
        self.cascade_from(0)
    }

    /// Checks the three structural invariants against fresh provider calls.
    pub fn invariants_hold(&self) -> bool {
        (0..self.len()).all(|i| {
            let value_offered = self.values[i].as_ref().is_none_or(|v| self.options[i].contains(v));
            let options_fresh = self.options[i] == self.compute_options(i);
            let left_set = i == 0 || self.values[i - 1].is_some() || self.values[i].is_none();
            value_offered && options_fresh && left_set
        })
    }
}
