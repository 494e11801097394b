//! JSON wire formats for posets, maps, pairs, chains and cocones.
//!
//! A poset is written inline as `{"elems", "leq", "bottom"}` or referenced
//! by name. Names resolve against the document's `"posets"` registry first
//! and then against the built-in constants (`1`, `2`, …, `vee`, `diamond`).
//! A map is `{"dom", "cod", "table": {elem: elem}}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chains::{Cocone, OmegaChain};
use crate::error::{Error, Result};
use crate::finposet::{FinPoset, MonotoneMap, PosetData};
use crate::functors::named_constant;
use crate::opairs::{PairHom, PairKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetRef {
    Name(String),
    Inline(PosetData),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub dom: PosetRef,
    pub cod: PosetRef,
    pub table: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    pub kind: PairKind,
    pub l: MapJson,
    pub r: MapJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainJson {
    pub kind: PairKind,
    pub objects: Vec<PosetRef>,
    pub links: Vec<PairJson>,
    #[serde(default)]
    pub stab_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoconeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub posets: Option<BTreeMap<String, PosetData>>,
    pub chain: ChainJson,
    pub apex: PosetRef,
    pub legs: Vec<PairJson>,
}

/// Resolves poset references, sharing one `Arc` per name.
#[derive(Default)]
pub struct Decoder {
    registry: BTreeMap<String, PosetData>,
    resolved: HashMap<String, Arc<FinPoset>>,
}

impl Decoder {
    pub fn new(registry: Option<&BTreeMap<String, PosetData>>) -> Self {
        Decoder {
            registry: registry.cloned().unwrap_or_default(),
            resolved: HashMap::new(),
        }
    }

    pub fn poset(&mut self, r: &PosetRef) -> Result<Arc<FinPoset>> {
        match r {
            PosetRef::Inline(d) => Ok(Arc::new(FinPoset::from_data(d.clone())?)),
            PosetRef::Name(n) => {
                if let Some(p) = self.resolved.get(n) {
                    return Ok(p.clone());
                }
                let p = match self.registry.get(n) {
                    Some(d) => Arc::new(FinPoset::from_data(d.clone())?),
                    None => named_constant(n)
                        .ok_or_else(|| Error::UnknownObject(n.clone()))?
                        .poset,
                };
                self.resolved.insert(n.clone(), p.clone());
                Ok(p)
            }
        }
    }

    pub fn map(&mut self, m: &MapJson) -> Result<MonotoneMap> {
        let (dom, cod) = (self.poset(&m.dom)?, self.poset(&m.cod)?);
        for k in m.table.keys() {
            dom.index_of(k).ok_or_else(|| Error::UnknownElement(k.clone()))?;
        }
        let pairs: Vec<(&str, &str)> = m.table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        MonotoneMap::from_names(dom, cod, &pairs)
    }

    pub fn pair(&mut self, p: &PairJson) -> Result<PairHom> {
        let (l, r) = (self.map(&p.l)?, self.map(&p.r)?);
        PairHom::new(p.kind, l, r)
    }

    pub fn chain(&mut self, c: &ChainJson) -> Result<OmegaChain> {
        let objects = c.objects.iter().map(|o| self.poset(o)).collect::<Result<Vec<_>>>()?;
        let links = c.links.iter().map(|l| self.pair(l)).collect::<Result<Vec<_>>>()?;
        OmegaChain::new(c.kind, objects, links, c.stab_index)
    }

    pub fn cocone(&mut self, k: &CoconeJson) -> Result<Cocone> {
        let chain = self.chain(&k.chain)?;
        let apex = self.poset(&k.apex)?;
        let legs = k.legs.iter().map(|l| self.pair(l)).collect::<Result<Vec<_>>>()?;
        Cocone::new(chain, apex, legs)
    }
}

/// Names every distinct poset `P0, P1, …` in order of first appearance.
#[derive(Default)]
pub struct Encoder {
    posets: Vec<Arc<FinPoset>>,
}

impl Encoder {
    pub fn poset(&mut self, p: &Arc<FinPoset>) -> PosetRef {
        let i = match self.posets.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                self.posets.push(p.clone());
                self.posets.len() - 1
            }
        };
        PosetRef::Name(format!("P{i}"))
    }

    pub fn map(&mut self, m: &MonotoneMap) -> MapJson {
        MapJson {
            dom: self.poset(m.dom()),
            cod: self.poset(m.cod()),
            table: m.named_table().into_iter().collect(),
        }
    }

    pub fn pair(&mut self, p: &PairHom) -> PairJson {
        PairJson {
            kind: p.kind(),
            l: self.map(p.l()),
            r: self.map(p.r()),
        }
    }

    pub fn chain(&mut self, d: &OmegaChain) -> ChainJson {
        ChainJson {
            kind: d.kind(),
            objects: d.objects().iter().map(|p| self.poset(p)).collect(),
            links: d.links().iter().map(|l| self.pair(l)).collect(),
            stab_index: d.stab_index(),
        }
    }

    pub fn registry(&self) -> BTreeMap<String, PosetData> {
        self.posets
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("P{i}"), p.to_data()))
            .collect()
    }
}

pub fn encode_cocone(k: &Cocone) -> CoconeJson {
    let mut e = Encoder::default();
    let chain = e.chain(k.chain());
    let apex = e.poset(k.apex());
    let legs = k.legs().iter().map(|l| e.pair(l)).collect();
    CoconeJson {
        posets: Some(e.registry()),
        chain,
        apex,
        legs,
    }
}

pub fn cocone_from_str(s: &str) -> Result<Cocone> {
    let j: CoconeJson = serde_json::from_str(s)?;
    Decoder::new(j.posets.as_ref()).cocone(&j)
}

pub fn cocone_to_string(k: &Cocone) -> Result<String> {
    Ok(serde_json::to_string_pretty(&encode_cocone(k))?)
}

pub fn poset_from_str(s: &str) -> Result<FinPoset> {
    FinPoset::from_data(serde_json::from_str(s)?)
}

pub fn poset_to_string(p: &FinPoset) -> Result<String> {
    Ok(serde_json::to_string(&p.to_data())?)
}

/// Reads a map whose endpoints are inline or built-in names.
pub fn map_from_str(s: &str) -> Result<MonotoneMap> {
    let j: MapJson = serde_json::from_str(s)?;
    Decoder::default().map(&j)
}

pub fn pair_from_str(s: &str) -> Result<PairHom> {
    let j: PairJson = serde_json::from_str(s)?;
    Decoder::default().pair(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{check_local_determination, colimit_finite};
    use crate::fixtures::{counterexample_cocone, one_two_two_chain};

    #[test]
    fn cocone_round_trip() {
        for k in [counterexample_cocone(3), colimit_finite(&one_two_two_chain()).unwrap()] {
            let s = cocone_to_string(&k).unwrap();
            let back = cocone_from_str(&s).unwrap();
            assert_eq!(back.legs(), k.legs());
            assert_eq!(back.chain(), k.chain());
            assert_eq!(back.apex(), k.apex());
        }
    }

    #[test]
    fn builtin_names_and_inline_posets() {
        let s = r#"{"dom": "2", "cod": {"elems": ["a", "b"], "leq": [[true, true], [false, true]], "bottom": "a"},
                    "table": {"0": "a", "1": "b"}}"#;
        let m = map_from_str(s).unwrap();
        assert_eq!(m.table(), &[0, 1]);
        let s = r#"{"kind": "EP",
                    "l": {"dom": "1", "cod": "2", "table": {"*": "0"}},
                    "r": {"dom": "2", "cod": "1", "table": {"0": "*", "1": "*"}}}"#;
        let p = pair_from_str(s).unwrap();
        assert_eq!(p.kind(), PairKind::Ep);
    }

    #[test]
    fn decoding_errors() {
        let bad_elem = r#"{"dom": "2", "cod": "2", "table": {"0": "0", "1": "1", "7": "0"}}"#;
        assert!(matches!(map_from_str(bad_elem), Err(Error::UnknownElement(_))));
        let missing = r#"{"dom": "2", "cod": "2", "table": {"0": "0"}}"#;
        assert!(map_from_str(missing).is_err());
        let not_monotone = r#"{"dom": "2", "cod": "2", "table": {"0": "1", "1": "0"}}"#;
        assert!(matches!(map_from_str(not_monotone), Err(Error::NotMonotone { .. })));
        let unknown = r#"{"dom": "cube", "cod": "2", "table": {}}"#;
        assert!(matches!(map_from_str(unknown), Err(Error::UnknownObject(_))));
        assert!(matches!(map_from_str("{"), Err(Error::Json(_))));
        let not_pair = r#"{"kind": "EP",
                    "l": {"dom": "1", "cod": "2", "table": {"*": "1"}},
                    "r": {"dom": "2", "cod": "1", "table": {"0": "*", "1": "*"}}}"#;
        assert!(matches!(pair_from_str(not_pair), Err(Error::InvalidPair { .. })));
    }

    #[test]
    fn shipped_counterexample_fixture() {
        let text = include_str!("../fixtures/counterexample.json");
        let k = cocone_from_str(text).unwrap();
        let r = check_local_determination(&k).unwrap();
        assert!(!r.verdict);
        assert!(r.defects.iter().all(|&d| d == 1));
    }
}
