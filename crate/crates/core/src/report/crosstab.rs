use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{ReportError, Result};
use crate::clustering::ClusterAssignment;
use crate::ingest::{MechanismProfile, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    ForkOrigin,
    Consensus,
    HashingAlgorithm,
    DifficultyAdjustmentBlocks,
    BlockSizeLimitKind,
    Governance,
}

impl Attribute {
    pub const ALL: [Attribute; 6] = [
        Attribute::ForkOrigin,
        Attribute::Consensus,
        Attribute::HashingAlgorithm,
        Attribute::DifficultyAdjustmentBlocks,
        Attribute::BlockSizeLimitKind,
        Attribute::Governance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::ForkOrigin => "fork_origin",
            Attribute::Consensus => "consensus",
            Attribute::HashingAlgorithm => "hashing_algorithm",
            Attribute::DifficultyAdjustmentBlocks => "difficulty_adjustment_blocks",
            Attribute::BlockSizeLimitKind => "block_size_limit_kind",
            Attribute::Governance => "governance",
        }
    }

    /// Absent optional values render as `none`.
    pub fn value(self, p: &MechanismProfile) -> String {
        match self {
            Attribute::ForkOrigin => p.fork_origin.clone().unwrap_or_else(|| "none".into()),
            Attribute::Consensus => p.consensus.to_string(),
            Attribute::HashingAlgorithm => p.hashing_algorithm.clone(),
            Attribute::DifficultyAdjustmentBlocks => {
                p.difficulty_adjustment_blocks.map_or_else(|| "none".into(), |b| b.to_string())
            }
            Attribute::BlockSizeLimitKind => p.block_size_limit.kind.to_string(),
            Attribute::Governance => p.governance.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSummary {
    /// Value counts within the cluster.
    pub counts: BTreeMap<String, usize>,
    /// Most frequent value; alphabetically first on ties.
    pub modal: String,
    /// Modal count over cluster size.
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosstabRow {
    pub cluster_id: usize,
    pub coins: Vec<String>,
    pub attributes: BTreeMap<Attribute, AttributeSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributePurity {
    /// Mean of per-cluster purity weighted by cluster size.
    pub weighted: f64,
    /// Fraction of clusters whose members all share one value.
    pub homogeneous_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismCrosstab {
    pub metric: Metric,
    pub k: usize,
    pub rows: Vec<CrosstabRow>,
    pub purity: BTreeMap<Attribute, AttributePurity>,
}

pub fn crosstab(metric: Metric, assignment: &ClusterAssignment, profiles: &BTreeMap<String, MechanismProfile>) -> Result<MechanismCrosstab> {
    if let Some(c) = assignment.coin_ids.iter().find(|c| !profiles.contains_key(*c)) {
        return Err(ReportError::MissingProfile(c.clone()));
    }
    let total = assignment.coin_ids.len() as f64;
    let rows: Vec<CrosstabRow> = assignment
        .clusters()
        .into_iter()
        .map(|members| {
            let attributes = Attribute::ALL
                .into_iter()
                .map(|a| {
                    let mut counts = BTreeMap::new();
                    for c in &members.coins {
                        *counts.entry(a.value(&profiles[c])).or_insert(0) += 1;
                    }
                    // BTreeMap order makes the first maximum the alphabetically first.
                    let (modal, top) = counts.iter().fold((String::new(), 0), |best, (v, &n)| if n > best.1 { (v.clone(), n) } else { best });
                    let purity = if members.coins.is_empty() { 0.0 } else { top as f64 / members.coins.len() as f64 };
                    (a, AttributeSummary { counts, modal, purity })
                })
                .collect();
            CrosstabRow {
                cluster_id: members.id,
                coins: members.coins,
                attributes,
            }
        })
        .collect();

    let purity = Attribute::ALL
        .into_iter()
        .map(|a| {
            let weighted = rows.iter().map(|r| r.coins.len() as f64 * r.attributes[&a].purity).sum::<f64>() / total;
            let homogeneous = rows.iter().filter(|r| r.attributes[&a].counts.len() == 1).count();
            (
                a,
                AttributePurity {
                    weighted,
                    homogeneous_fraction: homogeneous as f64 / rows.len() as f64,
                },
            )
        })
        .collect();

    Ok(MechanismCrosstab {
        metric,
        k: assignment.k,
        rows,
        purity,
    })
}

impl MechanismCrosstab {
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} (k = {})\n", self.metric, self.k);
        let _ = write!(s, "| cluster | coins |");
        for a in Attribute::ALL {
            let _ = write!(s, " {} |", a.as_str());
        }
        let _ = write!(s, "\n|---|---|");
        for _ in Attribute::ALL {
            let _ = write!(s, "---|");
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(s, "| {} | {} |", r.cluster_id, r.coins.join(", "));
            for a in Attribute::ALL {
                let cell: Vec<String> = r.attributes[&a].counts.iter().map(|(v, n)| format!("{v} ×{n}")).collect();
                let _ = write!(s, " {} |", cell.join(", "));
            }
            s.push('\n');
        }
        let _ = write!(s, "\n| attribute | weighted purity | homogeneous clusters |\n|---|---|---|\n");
        for a in Attribute::ALL {
            let p = &self.purity[&a];
            let _ = writeln!(s, "| {} | {:.3} | {:.3} |", a.as_str(), p.weighted, p.homogeneous_fraction);
        }
        s
    }
}
