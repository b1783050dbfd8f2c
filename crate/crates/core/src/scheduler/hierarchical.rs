//! Two-level hierarchical bandit scheduler.

use super::{decode_companion_arm, ApSet, NetworkStructure, SchedulerError, SecondLevelKey};
use crate::bandit::{normalize_reward, BanditAgent, Hyperparams};
use crate::network::{Pair, Topology, TransmissionSet};
use rand::Rng;
use std::collections::HashMap;

/// Everything needed to credit a reward back to the agents that produced a
/// transmission set. Returned by [`HierarchicalScheduler::select`] and
/// consumed by [`HierarchicalScheduler::update`]; the pairing is enforced
/// with a sequence number so a stale or repeated context is rejected.
#[derive(Clone, Debug)]
pub struct DecisionContext {
    seq: u64,
    p0: Pair,
    first_arm: usize,
    second: Vec<(SecondLevelKey, usize)>,
}

impl DecisionContext {
    pub fn sharing_pair(&self) -> Pair {
        self.p0
    }

    /// Number of second-level agents sampled in this decision.
    pub fn n_second_level(&self) -> usize {
        self.second.len()
    }
}

/// Hierarchical two-level group selection.
///
/// First-level agents are keyed by the sharing pair and hold one arm per
/// subset of the other APs (a bitmask, so arm indexing is stable across
/// runs). Second-level agents are keyed by (AP, full transmitting AP set)
/// and hold one arm per station of that AP. Agents are created lazily on
/// first use.
pub struct HierarchicalScheduler {
    structure: NetworkStructure,
    theta: Hyperparams,
    first: HashMap<Pair, BanditAgent>,
    second: HashMap<SecondLevelKey, BanditAgent>,
    seq: u64,
    pending: Option<u64>,
}

impl HierarchicalScheduler {
    pub fn new(topo: &Topology, theta: Hyperparams) -> Result<Self, SchedulerError> {
        theta.validate()?;
        Ok(Self {
            structure: NetworkStructure::of(topo),
            theta,
            first: HashMap::new(),
            second: HashMap::new(),
            seq: 0,
            pending: None,
        })
    }

    pub fn structure(&self) -> &NetworkStructure {
        &self.structure
    }

    /// Selects the transmission set for one TXOP given the sharing pair.
    ///
    /// Samples the first-level agent for the companion AP subset, then one
    /// second-level agent per companion for its recipient station. The
    /// returned context must be passed to [`Self::update`] before the next
    /// select.
    pub fn select<R: Rng>(
        &mut self,
        p0: Pair,
        rng: &mut R,
    ) -> Result<(TransmissionSet, DecisionContext), SchedulerError> {
        if !self.structure.contains_pair(p0) {
            return Err(SchedulerError::InvalidPair(p0));
        }
        let n_aps = self.structure.n_aps();
        let first_arms = 1usize << (n_aps - 1);
        let theta = &self.theta;
        let first_agent = self
            .first
            .entry(p0)
            .or_insert_with(|| BanditAgent::new(first_arms, theta).expect("valid first level"));
        let first_arm = first_agent.sample(rng);

        let companions = decode_companion_arm(&self.structure, p0.ap, first_arm);
        let mut group = ApSet::from_aps(&self.structure, companions.iter().copied());
        group.insert(&self.structure, p0.ap);

        let mut pairs = vec![p0];
        let mut second = Vec::with_capacity(companions.len());
        for ap in companions {
            let key = SecondLevelKey::new(&self.structure, ap, group);
            let stations = self.structure.stations_of(ap);
            let agent = self.second.entry(key).or_insert_with(|| {
                BanditAgent::new(stations.len(), theta).expect("valid second level")
            });
            let arm = agent.sample(rng);
            pairs.push(Pair::new(ap, stations[arm]));
            second.push((key, arm));
        }

        self.seq += 1;
        self.pending = Some(self.seq);
        let context = DecisionContext {
            seq: self.seq,
            p0,
            first_arm,
            second,
        };
        let set = TransmissionSet::new(pairs).expect("distinct APs by construction");
        Ok((set, context))
    }

    /// Credits the raw effective data rate of the TXOP back to every agent
    /// sampled in `context`: all second-level agents first, then the
    /// first-level agent, each with the same normalized reward.
    pub fn update(
        &mut self,
        context: &DecisionContext,
        raw_reward_bps: f64,
    ) -> Result<(), SchedulerError> {
        if self.pending != Some(context.seq) {
            return Err(SchedulerError::StaleContext);
        }
        self.pending = None;
        let reward = normalize_reward(raw_reward_bps, &self.theta);
        for (key, arm) in &context.second {
            self.second
                .get_mut(key)
                .ok_or(SchedulerError::StaleContext)?
                .update(*arm, reward)?;
        }
        self.first
            .get_mut(&context.p0)
            .ok_or(SchedulerError::StaleContext)?
            .update(context.first_arm, reward)?;
        Ok(())
    }

    /// Number of first-level agents instantiated so far.
    pub fn first_level_agents(&self) -> usize {
        self.first.len()
    }

    /// Number of second-level agents instantiated so far.
    pub fn second_level_agents(&self) -> usize {
        self.second.len()
    }

    /// Arm count of the first-level agent for `p0`, if instantiated.
    pub fn first_level_arms(&self, p0: Pair) -> Option<usize> {
        self.first.get(&p0).map(|a| a.n_arms())
    }

    /// Total updates applied across all agents (for bookkeeping tests).
    pub fn total_agent_updates(&self) -> u64 {
        self.first.values().map(|a| a.updates()).sum::<u64>()
            + self.second.values().map(|a| a.updates()).sum::<u64>()
    }
}
