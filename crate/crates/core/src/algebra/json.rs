//! The JSON file format for algebras, groups and actions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::finite::FiniteAlgebra;
use super::signature::{Signature, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortDoc {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpDoc {
    pub name: String,
    pub args: Vec<String>,
    pub out: String,
    pub table: Vec<u32>,
}

/// Identity element and inverse table of a group stored as an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub identity: usize,
    pub inverses: Vec<u32>,
}

/// An action table `G × S → S`, row-major with the group element first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActDoc {
    pub name: String,
    pub size: usize,
    pub table: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub sorts: Vec<SortDoc>,
    pub ops: Vec<OpDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub act: Option<ActDoc>,
    /// Designated zero element per sort name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<BTreeMap<String, usize>>,
}

impl AlgebraDoc {
    pub fn from_algebra(alg: &FiniteAlgebra) -> AlgebraDoc {
        let sig = alg.signature();
        let name = |s: usize| sig.sort_name(s).to_string();
        AlgebraDoc {
            sorts: (0..sig.sort_count())
                .map(|s| SortDoc {
                    name: name(s),
                    size: alg.size(s),
                })
                .collect(),
            ops: sig
                .symbols()
                .iter()
                .enumerate()
                .map(|(i, sym)| OpDoc {
                    name: sym.name.clone(),
                    args: sym.args.iter().map(|&a| name(a)).collect(),
                    out: name(sym.out),
                    table: alg.table(i).to_vec(),
                })
                .collect(),
            labels: alg.labels().map(|l| {
                l.iter()
                    .enumerate()
                    .map(|(s, v)| (name(s), v.clone()))
                    .collect()
            }),
            provenance: None,
            group: None,
            act: None,
            zeros: None,
        }
    }

    pub fn to_algebra(&self) -> Result<FiniteAlgebra> {
        let sorts: Vec<String> = self.sorts.iter().map(|s| s.name.clone()).collect();
        let idx = |n: &str| {
            sorts
                .iter()
                .position(|s| s == n)
                .ok_or_else(|| Error::Json(format!("unknown sort `{n}`")))
        };
        let mut symbols = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let args = op.args.iter().map(|a| idx(a)).collect::<Result<Vec<_>>>()?;
            symbols.push(Symbol::new(op.name.clone(), args, idx(&op.out)?));
        }
        let sig = Signature::new(sorts.clone(), symbols)?;
        let alg = FiniteAlgebra::new(
            sig,
            self.sorts.iter().map(|s| s.size).collect(),
            self.ops.iter().map(|o| o.table.clone()).collect(),
        )?;
        match &self.labels {
            None => Ok(alg),
            Some(map) => {
                if let Some(k) = map.keys().find(|k| !sorts.contains(k)) {
                    return Err(Error::Json(format!("labels for unknown sort `{k}`")));
                }
                let labels = sorts
                    .iter()
                    .enumerate()
                    .map(|(s, n)| {
                        map.get(n)
                            .cloned()
                            .unwrap_or_else(|| (0..alg.size(s)).map(|e| e.to_string()).collect())
                    })
                    .collect();
                alg.with_labels(labels)
            }
        }
    }

    pub fn parse(text: &str) -> Result<AlgebraDoc> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Reads an algebra, ignoring any metadata blocks.
pub fn read_algebra(text: &str) -> Result<FiniteAlgebra> {
    AlgebraDoc::parse(text)?.to_algebra()
}

pub fn write_algebra(alg: &FiniteAlgebra) -> String {
    AlgebraDoc::from_algebra(alg).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_labels() {
        let a = FiniteAlgebra::from_fn(Signature::tau(), vec![2, 3], |_, x| (x[0] + x[1]) % 3)
            .unwrap()
            .with_labels(vec![
                vec!["e".into(), "g".into()],
                vec!["1".into(), "2".into(), "3".into()],
            ])
            .unwrap();
        let text = write_algebra(&a);
        assert_eq!(read_algebra(&text).unwrap(), a);
        assert_eq!(write_algebra(&read_algebra(&text).unwrap()), text);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(read_algebra("{").is_err());
        let bad = r#"{"sorts":[{"name":"A","size":2}],"ops":[{"name":"f","args":["B"],"out":"A","table":[0,1]}]}"#;
        assert!(read_algebra(bad).is_err());
        let short = r#"{"sorts":[{"name":"A","size":2}],"ops":[{"name":"f","args":["A"],"out":"A","table":[0]}]}"#;
        assert!(read_algebra(short).is_err());
    }
}
