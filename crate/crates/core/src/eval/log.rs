use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastRecord {
    pub item_id: String,
    pub user_id: String,
    pub seq: u64,
}

/// All records of one item, ordered by `seq`. The first record is the
/// submitter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemCascade {
    pub item_id: String,
    pub records: Vec<(String, u64)>,
}

impl ItemCascade {
    pub fn submitter(&self) -> &str {
        &self.records[0].0
    }
}

/// Item-sharing events grouped per item. Items keep the order in which
/// they first appear.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BroadcastLog {
    items: Vec<ItemCascade>,
}

impl BroadcastLog {
    pub fn from_records(records: impl IntoIterator<Item = BroadcastRecord>) -> Self {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut items: Vec<ItemCascade> = Vec::new();
        for r in records {
            let slot = *index.entry(r.item_id.clone()).or_insert_with(|| {
                items.push(ItemCascade {
                    item_id: r.item_id.clone(),
                    records: Vec::new(),
                });
                items.len() - 1
            });
            items[slot].records.push((r.user_id, r.seq));
        }
        for item in &mut items {
            // stable: equal seq keeps input order
            item.records.sort_by_key(|&(_, seq)| seq);
        }
        BroadcastLog { items }
    }

    pub fn items(&self) -> &[ItemCascade] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn record_count(&self) -> usize {
        self.items.iter().map(|i| i.records.len()).sum()
    }

    pub fn records(&self) -> impl Iterator<Item = BroadcastRecord> + '_ {
        self.items.iter().flat_map(|item| {
            item.records.iter().map(move |(user, seq)| BroadcastRecord {
                item_id: item.item_id.clone(),
                user_id: user.clone(),
                seq: *seq,
            })
        })
    }
}

const HEADER: [&str; 3] = ["item_id", "user_id", "seq"];

/// Reads the `item_id,user_id,seq` CSV form. A header row is required;
/// lines starting with `#` are ignored.
pub fn parse_broadcast_log(text: &str) -> Result<BroadcastLog> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_error(&e, 1))?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        let line = header.position().map_or(1, |p| p.line() as usize);
        return Err(Error::Parse {
            line,
            message: format!("expected header item_id,user_id,seq, found {:?}", header),
        });
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| parse_error(&e, 0))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields, found {}", row.len()),
            });
        }
        let (item, user, seq) = (&row[0], &row[1], &row[2]);
        if item.is_empty() || user.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty item or user id".into(),
            });
        }
        // would be written unquoted and read back as a comment
        if item.starts_with('#') || user.starts_with('#') {
            return Err(Error::Parse {
                line,
                message: "item and user ids may not start with '#'".into(),
            });
        }
        let seq = seq.parse::<u64>().map_err(|_| Error::Parse {
            line,
            message: format!("seq {seq:?} is not a non-negative integer"),
        })?;
        records.push(BroadcastRecord {
            item_id: item.to_string(),
            user_id: user.to_string(),
            seq,
        });
    }
    Ok(BroadcastLog::from_records(records))
}

fn parse_error(e: &csv::Error, fallback_line: usize) -> Error {
    let line = e
        .position()
        .map_or(fallback_line, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn write_broadcast_log<W: Write>(log: &BroadcastLog, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in log.records() {
        if r.item_id.starts_with('#') || r.user_id.starts_with('#') {
            return Err(Error::Param(format!(
                "id in record ({}, {}) starts with '#'",
                r.item_id, r.user_id
            )));
        }
        w.write_record([r.item_id.as_str(), r.user_id.as_str(), &r.seq.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
