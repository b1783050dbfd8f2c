//! Flat (single-step) bandit baseline.
//!
//! One agent per sharing pair; each arm is a complete companion-pair set,
//! encoded in mixed radix over the other APs in canonical order, with digit
//! 0 meaning "AP absent" and digit j >= 1 meaning "AP transmits to its
//! (j-1)-th station". The arm count for a sharing AP is therefore the
//! product of (1 + |stations|) over all other APs, which enumerates exactly
//! the subset-and-station choices the hierarchical scheduler can reach.

use super::{NetworkStructure, SchedulerError};
use crate::bandit::{normalize_reward, BanditAgent, Hyperparams};
use crate::network::{ApId, Pair, Topology, TransmissionSet};
use rand::Rng;
use std::collections::HashMap;

/// Select/update pairing token for the flat scheduler.
#[derive(Clone, Debug)]
pub struct FlatContext {
    seq: u64,
    p0: Pair,
    arm: usize,
}

impl FlatContext {
    pub fn sharing_pair(&self) -> Pair {
        self.p0
    }
}

pub struct FlatScheduler {
    structure: NetworkStructure,
    theta: Hyperparams,
    agents: HashMap<Pair, BanditAgent>,
    seq: u64,
    pending: Option<u64>,
}

impl FlatScheduler {
    pub fn new(topo: &Topology, theta: Hyperparams) -> Result<Self, SchedulerError> {
        theta.validate()?;
        Ok(Self {
            structure: NetworkStructure::of(topo),
            theta,
            agents: HashMap::new(),
            seq: 0,
            pending: None,
        })
    }

    pub fn structure(&self) -> &NetworkStructure {
        &self.structure
    }

    /// Arm count for a sharing AP: one companion-set choice per arm.
    pub fn arm_count(&self, sharing: ApId) -> usize {
        self.structure
            .aps()
            .iter()
            .filter(|ap| **ap != sharing)
            .map(|ap| 1 + self.structure.stations_of(*ap).len())
            .product()
    }

    /// Decodes an arm into the companion pairs it schedules.
    pub fn decode_arm(&self, sharing: ApId, arm: usize) -> Vec<Pair> {
        let mut pairs = Vec::new();
        let mut rest = arm;
        for ap in self.structure.aps() {
            if *ap == sharing {
                continue;
            }
            let stations = self.structure.stations_of(*ap);
            let radix = 1 + stations.len();
            let digit = rest % radix;
            rest /= radix;
            if digit > 0 {
                pairs.push(Pair::new(*ap, stations[digit - 1]));
            }
        }
        pairs
    }

    pub fn select<R: Rng>(
        &mut self,
        p0: Pair,
        rng: &mut R,
    ) -> Result<(TransmissionSet, FlatContext), SchedulerError> {
        if !self.structure.contains_pair(p0) {
            return Err(SchedulerError::InvalidPair(p0));
        }
        let arms = self.arm_count(p0.ap);
        let theta = &self.theta;
        let agent = self
            .agents
            .entry(p0)
            .or_insert_with(|| BanditAgent::new(arms, theta).expect("valid flat agent"));
        let arm = agent.sample(rng);

        let mut pairs = vec![p0];
        pairs.extend(self.decode_arm(p0.ap, arm));
        self.seq += 1;
        self.pending = Some(self.seq);
        let context = FlatContext {
            seq: self.seq,
            p0,
            arm,
        };
        let set = TransmissionSet::new(pairs).expect("distinct APs by construction");
        Ok((set, context))
    }

    pub fn update(
        &mut self,
        context: &FlatContext,
        raw_reward_bps: f64,
    ) -> Result<(), SchedulerError> {
        if self.pending != Some(context.seq) {
            return Err(SchedulerError::StaleContext);
        }
        self.pending = None;
        let reward = normalize_reward(raw_reward_bps, &self.theta);
        self.agents
            .get_mut(&context.p0)
            .ok_or(SchedulerError::StaleContext)?
            .update(context.arm, reward)?;
        Ok(())
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }
}
