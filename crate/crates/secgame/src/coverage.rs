//! Attainable-coverage sets and the maximin-coverage oracle.
//!
//! A defender's strategy space is a set of coverage vectors. Three
//! variants are supported:
//!
//! * explicit schedules mixed by a probability distribution, where the
//!   defender may additionally drop coverage below the mixture
//!   ([`ScheduleMode::Ssas`]);
//! * explicit schedules realized exactly, with no drop
//!   ([`ScheduleMode::Clearance`]);
//! * unit flows through a layered patrol network, where each vertex is a
//!   target and a target's coverage is bounded by the flow through its
//!   vertex.
//!
//! The central query is [`CoverageSet::maximin`]: the largest coverage a
//! defender can guarantee simultaneously on every target of a subset.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{CoverageVector, TargetId};
use crate::lp::{clamp_tiny_negative, LpBuilder, Var};

/// Default refusal threshold for explicit path enumeration.
pub const DEFAULT_PATH_CAP: u64 = 100_000;

/// How explicit schedules translate into attainable coverage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    /// Coverage may be dropped below the schedule mixture: a vector `v` is
    /// attainable iff `v(t) <= sum_z x(z) s_z(t)` for some distribution `x`.
    Ssas,
    /// Coverage equals the schedule mixture exactly.
    Clearance,
}

impl fmt::Display for ScheduleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleMode::Ssas => write!(f, "ssas"),
            ScheduleMode::Clearance => write!(f, "clearance"),
        }
    }
}

/// A patrol network with `layers` layers of `width` vertices each.
///
/// A patrol enters at the source, visits one vertex per layer changing its
/// level by at most one step between consecutive layers, and leaves at the
/// sink. The vertex at 0-based `(layer, level)` is target
/// `layer * width + level` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredNetwork {
    pub layers: usize,
    pub width: usize,
}

impl LayeredNetwork {
    pub fn new(layers: usize, width: usize) -> Result<Self> {
        if layers == 0 || width == 0 {
            return Err(Error::Validation(
                "a layered network needs at least one layer and width 1".into(),
            ));
        }
        Ok(LayeredNetwork { layers, width })
    }

    pub fn num_targets(&self) -> usize {
        self.layers * self.width
    }

    pub fn target_at(&self, layer: usize, level: usize) -> TargetId {
        debug_assert!(layer < self.layers && level < self.width);
        TargetId(layer * self.width + level)
    }

    /// Levels reachable from `level` in the next layer.
    fn next_levels(&self, level: usize) -> impl Iterator<Item = usize> {
        let lo = level.saturating_sub(1);
        let hi = (level + 1).min(self.width - 1);
        lo..=hi
    }

    /// Number of source-sink paths, saturating at `u128::MAX`.
    pub fn path_count(&self) -> u128 {
        let mut counts = vec![1u128; self.width];
        for _ in 1..self.layers {
            let mut next = vec![0u128; self.width];
            for (level, next_count) in next.iter_mut().enumerate() {
                let lo = level.saturating_sub(1);
                let hi = (level + 1).min(self.width - 1);
                for &c in &counts[lo..=hi] {
                    *next_count = next_count.saturating_add(c);
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// Materializes every source-sink path as an indicator coverage vector
    /// (1 on the vertices visited, 0 elsewhere). Refuses when the path
    /// count exceeds `cap`; intended as a small-instance oracle.
    pub fn enumerate_paths(&self, cap: u64) -> Result<Vec<CoverageVector>> {
        let count = self.path_count();
        if count > cap as u128 {
            return Err(Error::PathCapExceeded { count, cap });
        }
        let mut paths = Vec::with_capacity(count as usize);
        let mut levels = Vec::with_capacity(self.layers);
        for start in 0..self.width {
            levels.push(start);
            self.extend_path(&mut levels, &mut paths);
            levels.pop();
        }
        Ok(paths)
    }

    fn extend_path(&self, levels: &mut Vec<usize>, out: &mut Vec<CoverageVector>) {
        if levels.len() == self.layers {
            let mut cov = vec![0.0; self.num_targets()];
            for (layer, &level) in levels.iter().enumerate() {
                cov[self.target_at(layer, level).index()] = 1.0;
            }
            out.push(CoverageVector(cov));
            return;
        }
        let current = *levels.last().expect("path under construction is nonempty");
        for next in self.next_levels(current) {
            levels.push(next);
            self.extend_path(levels, out);
            levels.pop();
        }
    }
}

/// The maximin coverage over a target subset: a real value, or infinite
/// when the subset is empty and any coverage works vacuously.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MaximinValue {
    Finite(f64),
    Infinite,
}

impl MaximinValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, MaximinValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            MaximinValue::Finite(v) => Some(*v),
            MaximinValue::Infinite => None,
        }
    }

    /// The finite value, with the infinite case mapped to 0: the height a
    /// defender actually needs when no target must be covered.
    pub fn finite_or_zero(&self) -> f64 {
        self.finite().unwrap_or(0.0)
    }

    /// True iff `self >= other - tol` under the usual extended-real order.
    pub fn at_least(&self, other: MaximinValue, tol: f64) -> bool {
        match (self, other) {
            (MaximinValue::Infinite, _) => true,
            (MaximinValue::Finite(_), MaximinValue::Infinite) => false,
            (MaximinValue::Finite(a), MaximinValue::Finite(b)) => *a >= b - tol,
        }
    }
}

impl fmt::Display for MaximinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaximinValue::Finite(v) => write!(f, "{v}"),
            MaximinValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for MaximinValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MaximinValue::Finite(v) => serializer.serialize_f64(*v),
            MaximinValue::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for MaximinValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(MaximinValue::Finite(v)),
            Raw::Text(s) if s == "inf" => Ok(MaximinValue::Infinite),
            Raw::Text(s) => Err(D::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// The set of coverage vectors a defender can realize.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CoverageSet {
    Schedules {
        mode: ScheduleMode,
        schedules: Vec<CoverageVector>,
    },
    LayeredNetwork(LayeredNetwork),
}

impl CoverageSet {
    pub fn validate(&self, num_targets: usize) -> Result<()> {
        match self {
            CoverageSet::Schedules { schedules, .. } => {
                if schedules.is_empty() {
                    return Err(Error::Validation(
                        "a schedule set needs at least one schedule".into(),
                    ));
                }
                for (z, s) in schedules.iter().enumerate() {
                    s.validate(num_targets, &format!("schedule {}", z + 1))?;
                }
                Ok(())
            }
            CoverageSet::LayeredNetwork(net) => {
                LayeredNetwork::new(net.layers, net.width)?;
                if net.num_targets() != num_targets {
                    return Err(Error::Validation(format!(
                        "layered network has {} vertices but the game has {} targets",
                        net.num_targets(),
                        num_targets
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn num_targets(&self) -> usize {
        match self {
            CoverageSet::Schedules { schedules, .. } => {
                schedules.first().map_or(0, CoverageVector::len)
            }
            CoverageSet::LayeredNetwork(net) => net.num_targets(),
        }
    }

    /// True when coverage may be dropped below what the mixed strategy
    /// provides. Flow sets always allow dropping.
    pub fn allows_dropping(&self) -> bool {
        match self {
            CoverageSet::Schedules { mode, .. } => *mode == ScheduleMode::Ssas,
            CoverageSet::LayeredNetwork(_) => true,
        }
    }

    /// The largest height the defender can guarantee on every target of
    /// `subset` simultaneously, plus a witness coverage vector attaining
    /// it. The empty subset yields an infinite value and no witness.
    pub fn maximin(&self, subset: &[TargetId]) -> Result<(MaximinValue, Option<CoverageVector>)> {
        if subset.is_empty() {
            return Ok((MaximinValue::Infinite, None));
        }
        let num_targets = self.num_targets();
        let mut lp = LpBuilder::maximize();
        let h = lp.free_var(1.0);
        let coverage_terms = self.mixture_terms(&mut lp);
        for &j in subset {
            let mut row = coverage_terms[j.index()].clone();
            row.push((h, -1.0));
            lp.ge(&row, 0.0);
        }
        let sol = lp.solve_expect_optimal("maximin coverage")?;
        let value = clamp_tiny_negative(sol.objective());
        let witness = CoverageVector(
            coverage_terms
                .iter()
                .map(|terms| {
                    clamp_tiny_negative(
                        terms
                            .iter()
                            .map(|&(var, c)| c * sol.value(var))
                            .sum::<f64>(),
                    )
                    .max(0.0)
                })
                .collect(),
        );
        debug_assert_eq!(witness.len(), num_targets);
        Ok((MaximinValue::Finite(value), Some(witness)))
    }

    /// True iff `v` is attainable with constraint slack at least `-tol`.
    pub fn contains(&self, v: &CoverageVector, tol: f64) -> Result<bool> {
        if v.len() != self.num_targets() {
            return Err(Error::Validation(format!(
                "membership query has {} entries, coverage set covers {} targets",
                v.len(),
                self.num_targets()
            )));
        }
        let mut lp = LpBuilder::maximize();
        match self {
            CoverageSet::Schedules {
                mode: ScheduleMode::Clearance,
                ..
            } => {
                // Minimize the largest deviation between the mixture and v.
                let m = lp.var(-1.0, 0.0, f64::INFINITY);
                let terms = self.mixture_terms(&mut lp);
                for (j, row) in terms.iter().enumerate() {
                    let mut upper = row.clone();
                    upper.push((m, -1.0));
                    lp.le(&upper, v.0[j]);
                    let mut lower = row.clone();
                    lower.push((m, 1.0));
                    lp.ge(&lower, v.0[j]);
                }
                let sol = lp.solve_expect_optimal("clearance membership")?;
                Ok(-sol.objective() <= tol)
            }
            _ => {
                // Maximize the smallest slack of mixture(j) - v(j).
                let s = lp.free_var(1.0);
                let terms = self.mixture_terms(&mut lp);
                for (j, row) in terms.iter().enumerate() {
                    let mut slack = row.clone();
                    slack.push((s, -1.0));
                    lp.ge(&slack, v.0[j]);
                }
                let sol = lp.solve_expect_optimal("membership")?;
                Ok(sol.objective() >= -tol)
            }
        }
    }

    /// Adds the variables of one mixed strategy from this set and returns,
    /// per target, the terms whose sum is the coverage the strategy puts
    /// on that target (before any dropping).
    fn mixture_terms(&self, lp: &mut LpBuilder) -> Vec<Vec<(Var, f64)>> {
        match self {
            CoverageSet::Schedules { schedules, .. } => {
                let xs: Vec<Var> = schedules
                    .iter()
                    .map(|_| lp.var(0.0, 0.0, f64::INFINITY))
                    .collect();
                let simplex: Vec<(Var, f64)> = xs.iter().map(|&x| (x, 1.0)).collect();
                lp.eq(&simplex, 1.0);
                (0..self.num_targets())
                    .map(|j| {
                        schedules
                            .iter()
                            .zip(&xs)
                            .filter(|(s, _)| s.0[j] != 0.0)
                            .map(|(s, &x)| (x, s.0[j]))
                            .collect()
                    })
                    .collect()
            }
            CoverageSet::LayeredNetwork(net) => flow_throughput_terms(net, lp),
        }
    }

    /// Adds a fresh strategy for this set and returns one coverage
    /// variable per target. Under SSAS (and flows) the variables may take
    /// any value below the mixture; under clearance they equal it.
    pub(crate) fn strategy_vars(&self, lp: &mut LpBuilder) -> Vec<Var> {
        let terms = self.mixture_terms(lp);
        let exact = !self.allows_dropping();
        terms
            .into_iter()
            .map(|row| {
                let v = lp.var(0.0, 0.0, f64::INFINITY);
                let mut constraint = row;
                constraint.push((v, -1.0));
                if exact {
                    lp.eq(&constraint, 0.0);
                } else {
                    lp.ge(&constraint, 0.0);
                }
                v
            })
            .collect()
    }
}

/// Adds unit-flow variables for `net` and returns, per target, the inflow
/// terms of its vertex.
fn flow_throughput_terms(net: &LayeredNetwork, lp: &mut LpBuilder) -> Vec<Vec<(Var, f64)>> {
    let w = net.width;
    let source_edges: Vec<Var> = (0..w).map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
    let unit: Vec<(Var, f64)> = source_edges.iter().map(|&f| (f, 1.0)).collect();
    lp.eq(&unit, 1.0);

    // inter[l][a] holds the edge variables from (l, a) to each reachable
    // (l + 1, b), keyed by b.
    let mut inflows: Vec<Vec<(Var, f64)>> = source_edges.iter().map(|&f| vec![(f, 1.0)]).collect();
    let mut throughput = Vec::with_capacity(net.num_targets());
    for layer in 0..net.layers {
        let outflows: Vec<Vec<(Var, usize)>> = if layer + 1 < net.layers {
            (0..w)
                .map(|a| {
                    net.next_levels(a)
                        .map(|b| (lp.var(0.0, 0.0, f64::INFINITY), b))
                        .collect()
                })
                .collect()
        } else {
            (0..w)
                .map(|_| vec![(lp.var(0.0, 0.0, f64::INFINITY), usize::MAX)])
                .collect()
        };
        for a in 0..w {
            let mut conservation = inflows[a].clone();
            for &(f, _) in &outflows[a] {
                conservation.push((f, -1.0));
            }
            lp.eq(&conservation, 0.0);
            throughput.push(inflows[a].clone());
        }
        let mut next_inflows: Vec<Vec<(Var, f64)>> = vec![Vec::new(); w];
        for row in &outflows {
            for &(f, b) in row {
                if b != usize::MAX {
                    next_inflows[b].push((f, 1.0));
                }
            }
        }
        inflows = next_inflows;
    }
    throughput
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(raw: &[usize]) -> Vec<TargetId> {
        raw.iter().map(|&j| TargetId(j)).collect()
    }

    fn identity_schedules(mode: ScheduleMode) -> CoverageSet {
        CoverageSet::Schedules {
            mode,
            schedules: vec![
                CoverageVector(vec![1.0, 0.0, 0.0]),
                CoverageVector(vec![0.0, 1.0, 0.0]),
                CoverageVector(vec![0.0, 0.0, 1.0]),
            ],
        }
    }

    /// Grid search over the mixing weight of a two-schedule set,
    /// independent of the LP path: used to pin expected values.
    fn grid_maximin(s1: &[f64], s2: &[f64], subset: &[usize]) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for i in 0..=10_000 {
            let x = i as f64 / 10_000.0;
            let worst = subset
                .iter()
                .map(|&j| x * s1[j] + (1.0 - x) * s2[j])
                .fold(f64::INFINITY, f64::min);
            best = best.max(worst);
        }
        best
    }

    #[test]
    fn empty_subset_is_unconstrained() {
        let set = identity_schedules(ScheduleMode::Ssas);
        let (value, witness) = set.maximin(&[]).unwrap();
        assert_eq!(value, MaximinValue::Infinite);
        assert!(witness.is_none());
    }

    #[test]
    fn identity_split_across_all_targets() {
        let set = identity_schedules(ScheduleMode::Ssas);
        let (value, witness) = set.maximin(&ids(&[0, 1, 2])).unwrap();
        let v = value.finite().unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-9);
        let w = witness.unwrap();
        assert!(set.contains(&w, 1e-7).unwrap());
        for j in 0..3 {
            assert!(w.0[j] >= v - 1e-7);
        }

        let (value, _) = set.maximin(&ids(&[0, 2])).unwrap();
        assert!((value.finite().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn interleaved_pair_guarantees_half() {
        // Two schedules covering (1,0,1,0) and (0,1,0,1): on the pair
        // {first, last} the defender can guarantee exactly 1/2.
        let s1 = [1.0, 0.0, 1.0, 0.0];
        let s2 = [0.0, 1.0, 0.0, 1.0];
        let expected = grid_maximin(&s1, &s2, &[0, 3]);
        assert!((expected - 0.5).abs() < 1e-4);

        let set = CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: vec![CoverageVector(s1.to_vec()), CoverageVector(s2.to_vec())],
        };
        let (value, _) = set.maximin(&ids(&[0, 3])).unwrap();
        assert!((value.finite().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn overlapping_schedules_give_weighted_heights() {
        // Schedules (0.999, 1, 0.1, 0) and (0, 0.1, 1, 0.999): frozen
        // values checked against the grid oracle.
        let s1 = [0.999, 1.0, 0.1, 0.0];
        let s2 = [0.0, 0.1, 1.0, 0.999];
        let set = CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: vec![CoverageVector(s1.to_vec()), CoverageVector(s2.to_vec())],
        };

        let (pair, _) = set.maximin(&ids(&[1, 2])).unwrap();
        assert!((grid_maximin(&s1, &s2, &[1, 2]) - 0.55).abs() < 1e-4);
        assert!((pair.finite().unwrap() - 0.55).abs() < 1e-9);

        let (triple, _) = set.maximin(&ids(&[0, 1, 2])).unwrap();
        let expected = 0.999 / 1.899;
        assert!((grid_maximin(&s1, &s2, &[0, 1, 2]) - expected).abs() < 1e-4);
        assert!((triple.finite().unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn all_zero_schedules_yield_zero() {
        let set = CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: vec![CoverageVector(vec![0.0, 0.0])],
        };
        let (value, witness) = set.maximin(&ids(&[0, 1])).unwrap();
        let v = value.finite().unwrap();
        assert_eq!(v, 0.0);
        assert!(v.is_sign_positive(), "negative zero must be clamped");
        assert_eq!(witness.unwrap(), CoverageVector(vec![0.0, 0.0]));
    }

    #[test]
    fn membership_respects_mode() {
        let ssas = identity_schedules(ScheduleMode::Ssas);
        let clearance = identity_schedules(ScheduleMode::Clearance);
        let v = CoverageVector(vec![0.2, 0.2, 0.2]);
        assert!(ssas.contains(&v, 1e-7).unwrap());
        assert!(!clearance.contains(&v, 1e-7).unwrap());

        let exact = CoverageVector(vec![0.2, 0.3, 0.5]);
        assert!(clearance.contains(&exact, 1e-7).unwrap());
        assert!(ssas.contains(&exact, 1e-7).unwrap());

        let over = CoverageVector(vec![0.5, 0.6, 0.0]);
        assert!(!ssas.contains(&over, 1e-7).unwrap());
    }

    #[test]
    fn membership_accepts_dropped_mixture() {
        let set = CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: vec![
                CoverageVector(vec![1.0, 1.0, 0.1, 0.0]),
                CoverageVector(vec![0.0, 0.1, 1.0, 1.0]),
            ],
        };
        let v = CoverageVector(vec![0.0, 0.5, 0.5, 0.0]);
        assert!(set.contains(&v, 1e-7).unwrap());
    }

    #[test]
    fn path_enumeration_small_networks() {
        let net = LayeredNetwork::new(1, 2).unwrap();
        let paths = net.enumerate_paths(DEFAULT_PATH_CAP).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.contains(&CoverageVector(vec![1.0, 0.0])));
        assert!(paths.contains(&CoverageVector(vec![0.0, 1.0])));

        let net = LayeredNetwork::new(2, 1).unwrap();
        let paths = net.enumerate_paths(DEFAULT_PATH_CAP).unwrap();
        assert_eq!(paths, vec![CoverageVector(vec![1.0, 1.0])]);

        let net = LayeredNetwork::new(2, 2).unwrap();
        assert_eq!(net.path_count(), 4);
        assert_eq!(net.enumerate_paths(DEFAULT_PATH_CAP).unwrap().len(), 4);

        let net = LayeredNetwork::new(3, 4).unwrap();
        assert_eq!(net.path_count(), 26);
        match net.enumerate_paths(10) {
            Err(Error::PathCapExceeded { count: 26, cap: 10 }) => {}
            other => panic!("expected a cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn flow_maximin_matches_path_schedules() {
        let net = LayeredNetwork::new(2, 2).unwrap();
        let flow_set = CoverageSet::LayeredNetwork(net);
        let path_set = CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: net.enumerate_paths(DEFAULT_PATH_CAP).unwrap(),
        };
        let all = ids(&[0, 1, 2, 3]);
        let (via_flow, witness) = flow_set.maximin(&all).unwrap();
        let (via_paths, _) = path_set.maximin(&all).unwrap();
        assert!((via_flow.finite().unwrap() - 0.5).abs() < 1e-9);
        assert!((via_flow.finite().unwrap() - via_paths.finite().unwrap()).abs() < 1e-9);
        assert!(flow_set.contains(&witness.unwrap(), 1e-7).unwrap());
    }

    #[test]
    fn flow_membership() {
        let set = CoverageSet::LayeredNetwork(LayeredNetwork::new(2, 2).unwrap());
        assert!(set
            .contains(&CoverageVector(vec![0.5, 0.5, 0.5, 0.5]), 1e-7)
            .unwrap());
        assert!(set
            .contains(&CoverageVector(vec![1.0, 0.0, 1.0, 0.0]), 1e-7)
            .unwrap());
        assert!(!set
            .contains(&CoverageVector(vec![1.0, 1.0, 0.0, 0.0]), 1e-7)
            .unwrap());
    }

    #[test]
    fn coverage_set_json_shapes() {
        let set = identity_schedules(ScheduleMode::Ssas);
        let json = serde_json::to_string(&set).unwrap();
        assert!(json.contains("\"type\":\"schedules\""));
        assert!(json.contains("\"mode\":\"ssas\""));
        assert_eq!(serde_json::from_str::<CoverageSet>(&json).unwrap(), set);

        let net = CoverageSet::LayeredNetwork(LayeredNetwork::new(3, 4).unwrap());
        let json = serde_json::to_string(&net).unwrap();
        assert_eq!(
            json,
            "{\"type\":\"layered_network\",\"layers\":3,\"width\":4}"
        );
        assert_eq!(serde_json::from_str::<CoverageSet>(&json).unwrap(), net);
    }

    #[test]
    fn maximin_value_serialization() {
        assert_eq!(
            serde_json::to_string(&MaximinValue::Finite(0.5)).unwrap(),
            "0.5"
        );
        assert_eq!(
            serde_json::to_string(&MaximinValue::Infinite).unwrap(),
            "\"inf\""
        );
        assert_eq!(
            serde_json::from_str::<MaximinValue>("\"inf\"").unwrap(),
            MaximinValue::Infinite
        );
        assert_eq!(
            serde_json::from_str::<MaximinValue>("0.25").unwrap(),
            MaximinValue::Finite(0.25)
        );
    }

    #[test]
    fn extended_value_comparisons() {
        let inf = MaximinValue::Infinite;
        let half = MaximinValue::Finite(0.5);
        assert!(inf.at_least(half, 0.0));
        assert!(inf.at_least(inf, 0.0));
        assert!(!half.at_least(inf, 0.0));
        assert!(half.at_least(MaximinValue::Finite(0.5 + 5e-8), 1e-7));
        assert!(!half.at_least(MaximinValue::Finite(0.6), 1e-7));
    }
}
