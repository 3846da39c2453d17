//! Per-user usage tracking and the composite priority score.
//!
//! A control's score is `base_weight + alpha * activation_count`. Ties are
//! broken by definition index so an untouched toolbar ranks in its
//! predefined order. Counts never decay.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ids::{ControlId, UserId};
use crate::rational::Rational;
use crate::toolbar::ControlSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageProfile {
    pub user_id: UserId,
    #[serde(default)]
    pub counts: BTreeMap<ControlId, u64>,
    #[serde(default)]
    pub last_used: BTreeMap<ControlId, u64>,
    #[serde(default)]
    pub next_seq: u64,
}

impl UsageProfile {
    pub fn new(user_id: UserId) -> Self {
        UsageProfile {
            user_id,
            counts: BTreeMap::new(),
            last_used: BTreeMap::new(),
            next_seq: 0,
        }
    }

    pub fn count(&self, id: &str) -> u64 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    pub fn total_activations(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Ids need not be registered on any toolbar; entries for removed
    /// controls are kept.
    pub fn record_activation(&mut self, control: &ControlId) {
        *self.counts.entry(control.clone()).or_insert(0) += 1;
        self.last_used.insert(control.clone(), self.next_seq);
        self.next_seq += 1;
    }

    /// The control with the highest `last_used` sequence number.
    pub fn most_recent(&self) -> Option<&ControlId> {
        self.last_used.iter().max_by_key(|(_, seq)| **seq).map(|(id, _)| id)
    }

    /// True when the stored maps and counter are mutually consistent.
    pub fn is_consistent(&self) -> bool {
        self.last_used.keys().all(|k| self.counts.contains_key(k))
            && self.counts.values().all(|&c| c >= 1)
            && self.last_used.values().all(|&s| s < self.next_seq)
    }
}

/// Ordered by score descending, then definition index ascending; the
/// "greater" score in `Ord` terms is the one ranked first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityScore {
    pub score: Rational,
    pub definition_index: usize,
}

impl Ord for PriorityScore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .cmp(&other.score)
            .then_with(|| other.definition_index.cmp(&self.definition_index))
    }
}

impl PartialOrd for PriorityScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn score(profile: &UsageProfile, spec: &ControlSpec, alpha: Rational) -> PriorityScore {
    let count = i64::try_from(profile.count(spec.id.as_str())).unwrap_or(i64::MAX);
    PriorityScore {
        score: spec.base_weight + alpha * Rational::from_integer(count),
        definition_index: spec.definition_index,
    }
}

/// Control ids in display priority order.
pub fn rank(profile: &UsageProfile, specs: &[ControlSpec], alpha: Rational) -> Vec<ControlId> {
    rank_specs(profile, specs, alpha).into_iter().map(|s| s.id.clone()).collect()
}

/// Like [`rank`], but hands back the specs themselves.
pub fn rank_specs<'a>(
    profile: &UsageProfile,
    specs: impl IntoIterator<Item = &'a ControlSpec>,
    alpha: Rational,
) -> Vec<&'a ControlSpec> {
    let mut scored: Vec<(PriorityScore, &ControlSpec)> =
        specs.into_iter().map(|s| (score(profile, s, alpha), s)).collect();
    scored.sort_by_key(|s| std::cmp::Reverse(s.0));
    scored.into_iter().map(|(_, s)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile() -> UsageProfile {
        UsageProfile::new(UserId::from("alice"))
    }

    fn specs(weights: &[i64]) -> Vec<ControlSpec> {
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let id = ((b'a' + i as u8) as char).to_string();
                let mut s = ControlSpec::new(id.as_str(), id.as_str(), id.as_str());
                s.base_weight = Rational::from_integer(*w);
                s.definition_index = i;
                s
            })
            .collect()
    }

    fn ids(v: &[ControlId]) -> Vec<&str> {
        v.iter().map(|i| i.as_str()).collect()
    }

    #[test]
    fn activation_bookkeeping() {
        let mut p = profile();
        p.record_activation(&"save".into());
        assert_eq!(p.counts, BTreeMap::from([("save".into(), 1)]));
        assert_eq!(p.last_used, BTreeMap::from([("save".into(), 0)]));
        assert_eq!(p.next_seq, 1);

        p.record_activation(&"save".into());
        assert_eq!(p.count("save"), 2);
        assert_eq!(p.last_used["save"], 1);

        p.record_activation(&"print".into());
        assert_eq!(p.count("save"), 2);
        assert_eq!(p.last_used["save"], 1);
        assert_eq!(p.count("print"), 1);
        assert_eq!(p.last_used["print"], 2);
        assert_eq!(p.most_recent().unwrap().as_str(), "print");
        assert!(p.is_consistent());
    }

    #[test]
    fn score_formula() {
        let mut p = profile();
        let mut s = specs(&[2]).remove(0);
        for _ in 0..3 {
            p.record_activation(&s.id);
        }
        assert_eq!(score(&p, &s, Rational::ONE).score, Rational::from_integer(5));
        assert_eq!(score(&profile(), &s, Rational::ONE).score, Rational::from_integer(2));

        s.base_weight = Rational::ONE;
        p.record_activation(&s.id);
        assert_eq!(score(&p, &s, Rational::new(1, 2)).score, Rational::from_integer(3));
    }

    #[test]
    fn rank_by_weight() {
        assert_eq!(ids(&rank(&profile(), &specs(&[1, 5, 1]), Rational::ONE)), ["b", "a", "c"]);
    }

    #[test]
    fn rank_usage_dominates() {
        let mut p = profile();
        for _ in 0..10 {
            p.record_activation(&"c".into());
        }
        assert_eq!(ids(&rank(&p, &specs(&[1, 1, 1]), Rational::ONE)), ["c", "a", "b"]);
    }

    #[test]
    fn rank_ties_keep_definition_order() {
        assert_eq!(ids(&rank(&profile(), &specs(&[3, 3, 3, 3]), Rational::ONE)), ["a", "b", "c", "d"]);
    }

    #[test]
    fn rank_ignores_unknown_profile_entries() {
        let mut p = profile();
        p.record_activation(&"removed".into());
        assert_eq!(ids(&rank(&p, &specs(&[1, 2]), Rational::ONE)), ["b", "a"]);
    }

    fn arb_case() -> impl Strategy<Value = (Vec<i64>, Vec<usize>, usize, (i64, i64))> {
        (1usize..10).prop_flat_map(|n| {
            (
                prop::collection::vec(0i64..6, n),
                prop::collection::vec(0..n, 0..20),
                0..n,
                (0i64..4, 1i64..4),
            )
        })
    }

    proptest! {
        #[test]
        fn rank_is_permutation((weights, acts, _x, (an, ad)) in arb_case()) {
            let s = specs(&weights);
            let mut p = profile();
            for a in acts {
                p.record_activation(&s[a].id);
            }
            let mut r = rank(&p, &s, Rational::new(an, ad));
            r.sort();
            let mut want: Vec<ControlId> = s.iter().map(|c| c.id.clone()).collect();
            want.sort();
            prop_assert_eq!(r, want);
        }

        #[test]
        fn activation_is_monotone((weights, acts, x, (an, ad)) in arb_case()) {
            let s = specs(&weights);
            let alpha = Rational::new(an, ad);
            let mut p = profile();
            for a in acts {
                p.record_activation(&s[a].id);
            }
            let before = rank(&p, &s, alpha);
            p.record_activation(&s[x].id);
            let after = rank(&p, &s, alpha);
            let pos = |v: &[ControlId], id: &ControlId| v.iter().position(|i| i == id).unwrap();
            let xid = &s[x].id;
            prop_assert!(pos(&after, xid) <= pos(&before, xid));
            let others_before: Vec<_> = before.iter().filter(|i| *i != xid).collect();
            let others_after: Vec<_> = after.iter().filter(|i| *i != xid).collect();
            prop_assert_eq!(others_before, others_after);
        }

        #[test]
        fn profiles_are_isolated(acts in prop::collection::vec(0usize..5, 0..30)) {
            let mut a = profile();
            let mut b = UsageProfile::new(UserId::from("bob"));
            b.record_activation(&"x".into());
            let b_before = b.clone();
            for i in acts {
                a.record_activation(&format!("c{i}").into());
            }
            prop_assert_eq!(b, b_before);
            prop_assert!(a.is_consistent());
        }
    }
}
