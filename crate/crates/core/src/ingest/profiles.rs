use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use super::{IngestError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Consensus {
    PoW,
    PoS,
    #[serde(rename = "other")]
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSizeLimitKind {
    Static,
    Dynamic,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Governance {
    Public,
    Private,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSizeLimit {
    pub kind: BlockSizeLimitKind,
    pub bytes: Option<u64>,
}

/// Blockchain mechanism attributes of one coin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismProfile {
    pub coin_id: String,
    pub fork_origin: Option<String>,
    pub consensus: Consensus,
    pub hashing_algorithm: String,
    pub difficulty_adjustment_blocks: Option<u64>,
    pub target_block_time_minutes: Option<f64>,
    pub block_size_limit: BlockSizeLimit,
    pub governance: Governance,
}

impl fmt::Display for Consensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Consensus::PoW => "PoW",
            Consensus::PoS => "PoS",
            Consensus::Other => "other",
        })
    }
}

impl fmt::Display for BlockSizeLimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockSizeLimitKind::Static => "static",
            BlockSizeLimitKind::Dynamic => "dynamic",
            BlockSizeLimitKind::None => "none",
        })
    }
}

impl fmt::Display for Governance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Governance::Public => "public",
            Governance::Private => "private",
        })
    }
}

const KEYS: [&str; 9] = [
    "coin_id",
    "fork_origin",
    "consensus",
    "hashing_algorithm",
    "difficulty_adjustment_blocks",
    "target_block_time_minutes",
    "block_size_limit_kind",
    "block_size_limit_bytes",
    "governance",
];

pub fn load_profiles(path: impl AsRef<Path>) -> Result<BTreeMap<String, MechanismProfile>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_profiles(&text)
}

/// Parses the profiles document: a TOML file whose only top-level key is an
/// array of `[[coin]]` tables using exactly the keys listed in `KEYS`.
pub fn parse_profiles(text: &str) -> Result<BTreeMap<String, MechanismProfile>> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| IngestError::ProfileSyntax(e.to_string()))?;
    if let Some(key) = doc.keys().find(|k| *k != "coin") {
        return Err(IngestError::ProfileSyntax(format!("unexpected top-level key `{key}`")));
    }
    let entries = match doc.get("coin") {
        Some(Value::Array(items)) => items.as_slice(),
        Some(_) => return Err(IngestError::ProfileSyntax("`coin` must be an array of tables".into())),
        None => &[],
    };

    let mut out = BTreeMap::new();
    for (index, entry) in entries.iter().enumerate() {
        let Value::Table(table) = entry else {
            return Err(IngestError::ProfileSyntax(format!("coin entry #{index} is not a table")));
        };
        let profile = profile_from_table(index, table)?;
        if out.contains_key(&profile.coin_id) {
            return Err(IngestError::DuplicateCoin(profile.coin_id));
        }
        out.insert(profile.coin_id.clone(), profile);
    }
    Ok(out)
}

fn profile_from_table(index: usize, t: &Table) -> Result<MechanismProfile> {
    let coin_id = match t.get("coin_id") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            return Err(IngestError::ProfileSyntax(format!("coin entry #{index}: `coin_id` must be a string")));
        }
        None => {
            return Err(IngestError::MissingRequiredField {
                index,
                coin: "?".into(),
                field: "coin_id",
            })
        }
    };
    if !is_token(&coin_id) {
        return Err(IngestError::InvalidField {
            coin: coin_id,
            field: "coin_id",
            reason: "must be non-empty and use only [A-Za-z0-9_-]".into(),
        });
    }
    if let Some(key) = t.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(IngestError::ProfileSyntax(format!("coin `{coin_id}`: unknown key `{key}`")));
    }

    let f = Fields { index, coin: &coin_id, table: t };

    let fork_origin = f.opt_str("fork_origin")?.filter(|s| s != "none");
    let consensus = match f.req_str("consensus")?.as_str() {
        "PoW" => Consensus::PoW,
        "PoS" => Consensus::PoS,
        "other" => Consensus::Other,
        other => return Err(f.unknown("consensus", other)),
    };
    let hashing_algorithm = f.req_str("hashing_algorithm")?;
    if hashing_algorithm.is_empty() || hashing_algorithm.chars().any(char::is_whitespace) {
        return Err(f.invalid("hashing_algorithm", "must be a single non-empty token"));
    }
    let difficulty_adjustment_blocks = f.opt_positive_int("difficulty_adjustment_blocks")?;
    let target_block_time_minutes = f.opt_positive_num("target_block_time_minutes")?;
    let kind = match f.req_str("block_size_limit_kind")?.as_str() {
        "static" => BlockSizeLimitKind::Static,
        "dynamic" => BlockSizeLimitKind::Dynamic,
        "none" => BlockSizeLimitKind::None,
        other => return Err(f.unknown("block_size_limit_kind", other)),
    };
    let bytes = f.opt_positive_int("block_size_limit_bytes")?;
    if kind == BlockSizeLimitKind::None && bytes.is_some() {
        return Err(f.invalid("block_size_limit_bytes", "not allowed when block_size_limit_kind = \"none\""));
    }
    let governance = match f.req_str("governance")?.as_str() {
        "public" => Governance::Public,
        "private" => Governance::Private,
        other => return Err(f.unknown("governance", other)),
    };

    Ok(MechanismProfile {
        coin_id,
        fork_origin,
        consensus,
        hashing_algorithm,
        difficulty_adjustment_blocks,
        target_block_time_minutes,
        block_size_limit: BlockSizeLimit { kind, bytes },
        governance,
    })
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

struct Fields<'a> {
    index: usize,
    coin: &'a str,
    table: &'a Table,
}

impl Fields<'_> {
    fn unknown(&self, field: &'static str, token: &str) -> IngestError {
        IngestError::UnknownEnumToken {
            coin: self.coin.to_string(),
            field,
            token: token.to_string(),
        }
    }

    fn invalid(&self, field: &'static str, reason: &str) -> IngestError {
        IngestError::InvalidField {
            coin: self.coin.to_string(),
            field,
            reason: reason.to_string(),
        }
    }

    fn opt_str(&self, field: &'static str) -> Result<Option<String>> {
        match self.table.get(field) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(self.invalid(field, "expected a string")),
        }
    }

    fn req_str(&self, field: &'static str) -> Result<String> {
        self.opt_str(field)?.ok_or_else(|| IngestError::MissingRequiredField {
            index: self.index,
            coin: self.coin.to_string(),
            field,
        })
    }

    fn opt_positive_int(&self, field: &'static str) -> Result<Option<u64>> {
        match self.table.get(field) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i > 0 => Ok(Some(*i as u64)),
            Some(_) => Err(self.invalid(field, "expected a positive integer")),
        }
    }

    fn opt_positive_num(&self, field: &'static str) -> Result<Option<f64>> {
        let v = match self.table.get(field) {
            None => return Ok(None),
            Some(Value::Integer(i)) => *i as f64,
            Some(Value::Float(x)) => *x,
            Some(_) => return Err(self.invalid(field, "expected a number")),
        };
        if v.is_finite() && v > 0.0 {
            Ok(Some(v))
        } else {
            Err(self.invalid(field, "expected a positive number"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITCOIN: &str = r#"
[[coin]]
coin_id = "bitcoin"
consensus = "PoW"
hashing_algorithm = "SHA-256"
difficulty_adjustment_blocks = 2016
target_block_time_minutes = 10
block_size_limit_kind = "static"
block_size_limit_bytes = 1000000
governance = "public"
"#;

    #[test]
    fn bitcoin_entry() {
        let p = parse_profiles(BITCOIN).unwrap();
        let btc = &p["bitcoin"];
        assert_eq!(btc.consensus, Consensus::PoW);
        assert_eq!(btc.hashing_algorithm, "SHA-256");
        assert_eq!(btc.difficulty_adjustment_blocks, Some(2016));
        assert_eq!(btc.target_block_time_minutes, Some(10.0));
        assert_eq!(btc.fork_origin, None);
    }

    #[test]
    fn dogecoin_fork_entry() {
        let text = r#"
[[coin]]
coin_id = "dogecoin"
fork_origin = "litecoin"
consensus = "PoW"
hashing_algorithm = "Scrypt"
difficulty_adjustment_blocks = 240
target_block_time_minutes = 1.0
block_size_limit_kind = "static"
governance = "public"
"#;
        let p = parse_profiles(text).unwrap();
        assert_eq!(p["dogecoin"].fork_origin.as_deref(), Some("litecoin"));
        assert_eq!(p["dogecoin"].difficulty_adjustment_blocks, Some(240));
    }

    #[test]
    fn duplicate_coin() {
        let z = BITCOIN.replace("bitcoin", "zcash");
        let err = parse_profiles(&format!("{z}\n{z}")).unwrap_err();
        assert!(matches!(err, IngestError::DuplicateCoin(ref c) if c == "zcash"));
    }

    #[test]
    fn unknown_enum_token() {
        let err = parse_profiles(&BITCOIN.replace("\"PoW\"", "\"PoA\"")).unwrap_err();
        assert!(matches!(err, IngestError::UnknownEnumToken { field: "consensus", .. }));
        let err = parse_profiles(&BITCOIN.replace("\"static\"", "\"elastic\"")).unwrap_err();
        assert!(matches!(err, IngestError::UnknownEnumToken { field: "block_size_limit_kind", .. }));
    }

    #[test]
    fn missing_required_field() {
        let err = parse_profiles(&BITCOIN.replace("governance = \"public\"\n", "")).unwrap_err();
        assert!(matches!(err, IngestError::MissingRequiredField { field: "governance", .. }));
        let err = parse_profiles(&BITCOIN.replace("coin_id = \"bitcoin\"\n", "")).unwrap_err();
        assert!(matches!(err, IngestError::MissingRequiredField { field: "coin_id", .. }));
    }

    #[test]
    fn strict_keys_and_values() {
        assert!(matches!(
            parse_profiles(&format!("{BITCOIN}colour = \"orange\"\n")),
            Err(IngestError::ProfileSyntax(_))
        ));
        assert!(matches!(
            parse_profiles(&BITCOIN.replace("2016", "-5")),
            Err(IngestError::InvalidField { field: "difficulty_adjustment_blocks", .. })
        ));
        assert!(matches!(
            parse_profiles(&BITCOIN.replace("\"bitcoin\"", "\"bit.coin\"")),
            Err(IngestError::InvalidField { field: "coin_id", .. })
        ));
    }

    #[test]
    fn pos_coin_may_carry_difficulty() {
        let text = BITCOIN.replace("\"PoW\"", "\"PoS\"");
        assert_eq!(parse_profiles(&text).unwrap()["bitcoin"].consensus, Consensus::PoS);
    }
}
