//! Splitting long chains into independently solvable pieces.
//!
//! A very strong link (`aᵢ ≥ √(1 + Pᵢ₊₁)`) can be cut outright. A weaker
//! link `a_k ≥ √(1 + P_{k+1})·h_k` can be cut when the prefix `1..k` is
//! solved by the simple HK scheme: the next receiver decodes and strips the
//! prefix's last user at its prefix-optimal rate. Users are one-based in
//! every public index here.

use serde::{Deserialize, Serialize};

use crate::capacity::cap;
use crate::channel::ChannelConfig;
use crate::hk::{effective_gains, max_sum_rate};
use crate::regimes::{classify, CapacityStatus};

/// Contiguous run of users `first_user..first_user + powers.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubChain {
    pub first_user: usize,
    pub gains: Vec<f64>,
    pub powers: Vec<f64>,
}

impl SubChain {
    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn last_user(&self) -> usize {
        self.first_user + self.len() - 1
    }

    /// Standard-form channel of this run; `None` for a single user.
    pub fn config(&self) -> Option<ChannelConfig> {
        (self.len() >= 2).then(|| {
            ChannelConfig::new(self.gains.clone(), self.powers.clone())
                .expect("sub-chain of a valid channel is valid")
        })
    }

    /// Users `start..end` of this run, zero-based relative to `first_user`.
    fn slice(&self, start: usize, end: usize) -> SubChain {
        SubChain {
            first_user: self.first_user + start,
            gains: self.gains[start..end - 1].to_vec(),
            powers: self.powers[start..end].to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VeryStrongSplit {
    pub chains: Vec<SubChain>,
    /// Users after which a link was cut.
    pub cuts: Vec<usize>,
}

/// Cuts every link with `aᵢ ≥ √(1 + Pᵢ₊₁)`.
pub fn remove_very_strong(cfg: &ChannelConfig) -> VeryStrongSplit {
    let whole = SubChain {
        first_user: 1,
        gains: cfg.gains().to_vec(),
        powers: cfg.powers().to_vec(),
    };
    let mut chains = Vec::new();
    let mut cuts = Vec::new();
    let mut start = 0;
    for (i, &gain) in cfg.gains().iter().enumerate() {
        if gain >= cfg.very_strong_threshold(i) {
            chains.push(whole.slice(start, i + 1));
            cuts.push(i + 1);
            start = i + 1;
        }
    }
    chains.push(whole.slice(start, cfg.users()));
    VeryStrongSplit { chains, cuts }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutReason {
    VeryStrong,
    Lemma2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub after: usize,
    pub reason: CutReason,
}

/// How a segment's value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentStatus {
    /// Point-to-point capacity.
    SingleUser,
    /// Two-user Z channel, whose sum capacity the simple HK optimum attains.
    TwoUserExact,
    ExactNoisy,
    ExactStrong,
    ExactMixedI,
    Gap05MixedII,
    AchievableOnly,
}

impl SegmentStatus {
    pub fn is_exact(self) -> bool {
        !matches!(self, SegmentStatus::Gap05MixedII | SegmentStatus::AchievableOnly)
    }
}

impl From<CapacityStatus> for SegmentStatus {
    fn from(status: CapacityStatus) -> Self {
        match status {
            CapacityStatus::ExactNoisy => SegmentStatus::ExactNoisy,
            CapacityStatus::ExactStrong => SegmentStatus::ExactStrong,
            CapacityStatus::ExactMixedI => SegmentStatus::ExactMixedI,
            CapacityStatus::Gap05MixedII => SegmentStatus::Gap05MixedII,
            CapacityStatus::AchievableOnly => SegmentStatus::AchievableOnly,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    /// First and last user, inclusive.
    pub range: [usize; 2],
    /// Sum capacity for exact statuses, otherwise the best achievable rate.
    pub value: f64,
    pub upper: f64,
    pub status: SegmentStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub segments: Vec<SegmentReport>,
    pub cuts: Vec<Cut>,
    /// Sum of segment values, present only when every segment is exact.
    pub total: Option<f64>,
}

impl Segmentation {
    pub fn segment_sum(&self) -> f64 {
        self.segments.iter().map(|s| s.value).sum()
    }
}

fn evaluate(chain: &SubChain) -> SegmentReport {
    let range = [chain.first_user, chain.last_user()];
    let (value, upper, status) = match chain.config() {
        None => {
            let v = cap(chain.powers[0]);
            (v, v, SegmentStatus::SingleUser)
        }
        Some(cfg) if cfg.users() == 2 => {
            let v = max_sum_rate(&cfg).sum_rate;
            (v, v, SegmentStatus::TwoUserExact)
        }
        Some(cfg) if cfg.users() == 3 => {
            let report = classify(&cfg).expect("very strong links are removed before segment evaluation");
            (report.achievable, report.upper, report.capacity_status.into())
        }
        Some(cfg) => {
            let bound = cfg.powers().iter().map(|&p| cap(p)).sum();
            (max_sum_rate(&cfg).sum_rate, bound, SegmentStatus::AchievableOnly)
        }
    };
    SegmentReport { range, value, upper, status }
}

/// Greedy left-to-right cutting of a chain without very strong links.
fn scan(chain: &SubChain, segments: &mut Vec<SegmentReport>, cuts: &mut Vec<Cut>) {
    let len = chain.len();
    let mut start = 0;
    'outer: loop {
        let remaining = len - start;
        // only 2- and 3-user prefixes have a known simple-HK sum capacity
        for k in 2..=remaining.saturating_sub(1).min(3) {
            let prefix = chain.slice(start, start + k);
            let report = evaluate(&prefix);
            if !report.status.is_exact() {
                continue;
            }
            let h_k = effective_gains(&prefix.config().expect("prefix has at least two users")).h[k - 1];
            let link = chain.gains[start + k - 1];
            let next_power = chain.powers[start + k];
            if link >= (1.0 + next_power).sqrt() * h_k {
                segments.push(report);
                cuts.push(Cut { after: prefix.last_user(), reason: CutReason::Lemma2 });
                start += k;
                continue 'outer;
            }
        }
        segments.push(evaluate(&chain.slice(start, len)));
        break;
    }
}

/// Very-strong removal followed by greedy prefix cutting on each piece.
pub fn lemma2_segment(cfg: &ChannelConfig) -> Segmentation {
    let split = remove_very_strong(cfg);
    let mut segments = Vec::new();
    let mut cuts: Vec<Cut> = split
        .cuts
        .iter()
        .map(|&after| Cut { after, reason: CutReason::VeryStrong })
        .collect();
    for chain in &split.chains {
        scan(chain, &mut segments, &mut cuts);
    }
    cuts.sort_by_key(|c| c.after);
    let total = segments
        .iter()
        .all(|s| s.status.is_exact())
        .then(|| segments.iter().map(|s| s.value).sum());
    Segmentation { segments, cuts, total }
}
