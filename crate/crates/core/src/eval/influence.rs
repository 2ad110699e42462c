use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::log::BroadcastLog;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Which submitters are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfluenceFilter {
    /// Qualifying items a user must have submitted.
    pub min_items: usize,
    /// Distinct rebroadcasters (of any kind) an item needs to qualify.
    pub min_rebroadcasts: usize,
    /// Count only rebroadcasts by out-neighbors of the submitter.
    pub followers_only: bool,
}

impl Default for InfluenceFilter {
    fn default() -> Self {
        InfluenceFilter {
            min_items: 2,
            min_rebroadcasts: 10,
            followers_only: true,
        }
    }
}

impl InfluenceFilter {
    pub fn new(min_items: usize, min_rebroadcasts: usize) -> Self {
        InfluenceFilter {
            min_items,
            min_rebroadcasts,
            ..Self::default()
        }
    }

    pub fn followers_only(mut self, on: bool) -> Self {
        self.followers_only = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfluenceEntry {
    /// Mean follower rebroadcasts per qualifying item.
    pub score: f64,
    pub items_counted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Influence {
    pub scores: BTreeMap<String, InfluenceEntry>,
    /// Repeated (item, user) records that were dropped.
    pub duplicates_removed: usize,
    /// Records whose user is not a node of the graph.
    pub unresolved_records: usize,
}

impl Influence {
    pub fn score_map(&self) -> BTreeMap<String, f64> {
        self.scores.iter().map(|(k, v)| (k.clone(), v.score)).collect()
    }
}

/// Average number of follower rebroadcasts per submitted item.
///
/// The first record of an item is its submitter. Each later user counts
/// once per item; it counts towards the score if it is an out-neighbor of
/// the submitter (or always, with `followers_only` off). An item
/// qualifies when it has at least `min_rebroadcasts` distinct
/// rebroadcasters; users with fewer than `min_items` qualifying items are
/// left out.
pub fn empirical_influence(
    log: &BroadcastLog,
    g: &DirectedGraph,
    filter: &InfluenceFilter,
) -> Result<Influence> {
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    let index = g.label_index();
    let mut duplicates_removed = 0;
    let mut unresolved_records = 0;
    // user -> (sum of counted rebroadcasts, qualifying items)
    let mut acc: BTreeMap<&str, (usize, usize)> = BTreeMap::new();

    for item in log.items() {
        let submitter = item.submitter();
        let sub_id = index.get(submitter).copied();
        if sub_id.is_none() {
            unresolved_records += 1;
        }
        let mut seen: HashSet<&str> = HashSet::with_capacity(item.records.len());
        seen.insert(submitter);
        let mut total = 0usize;
        let mut counted = 0usize;
        for (user, _) in &item.records[1..] {
            if !seen.insert(user.as_str()) {
                duplicates_removed += 1;
                continue;
            }
            total += 1;
            let user_id = index.get(user.as_str()).copied();
            if user_id.is_none() {
                unresolved_records += 1;
            }
            let counts = if filter.followers_only {
                matches!((sub_id, user_id), (Some(s), Some(u)) if g.has_edge(s, u))
            } else {
                true
            };
            if counts {
                counted += 1;
            }
        }
        if filter.followers_only && sub_id.is_none() {
            continue;
        }
        if total >= filter.min_rebroadcasts {
            let e = acc.entry(submitter).or_insert((0, 0));
            e.0 += counted;
            e.1 += 1;
        }
    }
    if duplicates_removed > 0 {
        log::warn!("dropped {duplicates_removed} duplicate (item, user) records");
    }

    let scores = acc
        .into_iter()
        .filter(|&(_, (_, items))| items >= filter.min_items.max(1))
        .map(|(user, (sum, items))| {
            (
                user.to_string(),
                InfluenceEntry {
                    score: sum as f64 / items as f64,
                    items_counted: items,
                },
            )
        })
        .collect();
    Ok(Influence {
        scores,
        duplicates_removed,
        unresolved_records,
    })
}

/// Writes `user_id,score,items_counted`, one row per scored user.
pub fn write_influence_csv<W: Write>(influence: &Influence, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["user_id", "score", "items_counted"])?;
    for (user, e) in &influence.scores {
        w.write_record([user.as_str(), &e.score.to_string(), &e.items_counted.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
