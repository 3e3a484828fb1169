use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Digraph, Instance, LabeledOrdering, Pair, VertexId, VertexSet};
use crate::error::{Error, Result};

pub const INSTANCE_SCHEMA: &str = "instance/1";
pub const ORDERING_SCHEMA: &str = "labeled-ordering/1";

pub type ArcList = Vec<[String; 2]>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    #[serde(rename = "A")]
    pub a: ArcList,
    #[serde(rename = "B")]
    pub b: ArcList,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub k: usize,
    pub vertices: Vec<String>,
    pub pairs: Vec<PairFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphFile {
    pub vertices: Vec<String>,
    pub arcs: ArcList,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledOrderingFile {
    pub order: Vec<String>,
    pub labels: Vec<u32>,
}

fn sorted_arcs(g: &Digraph) -> ArcList {
    let ids = g.vertices();
    let mut arcs: ArcList = g
        .arcs()
        .map(|(u, v)| [ids.id(u).to_string(), ids.id(v).to_string()])
        .collect();
    arcs.sort();
    arcs
}

fn graph_from_arcs(vs: &Arc<VertexSet>, arcs: &ArcList) -> Result<Digraph> {
    Digraph::from_named_arcs(
        vs.clone(),
        arcs.iter().map(|[u, v]| (u.as_str(), v.as_str())),
    )
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            k: inst.k(),
            vertices: inst
                .vertices()
                .ids()
                .iter()
                .map(|v| v.to_string())
                .collect(),
            pairs: inst
                .pairs()
                .iter()
                .map(|p| PairFile {
                    a: sorted_arcs(&p.a),
                    b: sorted_arcs(&p.b),
                })
                .collect(),
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        if f.k == 0 || f.k != f.pairs.len() {
            return Err(Error::BadK {
                k: f.k,
                pairs: f.pairs.len(),
            });
        }
        let vs = Arc::new(VertexSet::new(f.vertices)?);
        let pairs = f
            .pairs
            .iter()
            .map(|p| {
                Ok(Pair {
                    a: graph_from_arcs(&vs, &p.a)?,
                    b: graph_from_arcs(&vs, &p.b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(vs, pairs)
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = InstanceFile::deserialize(d)?;
        Instance::try_from(f).map_err(serde::de::Error::custom)
    }
}

impl From<&Digraph> for DigraphFile {
    fn from(g: &Digraph) -> Self {
        DigraphFile {
            vertices: g.vertices().ids().iter().map(|v| v.to_string()).collect(),
            arcs: sorted_arcs(g),
        }
    }
}

impl TryFrom<DigraphFile> for Digraph {
    type Error = Error;

    fn try_from(f: DigraphFile) -> Result<Self> {
        let vs = Arc::new(VertexSet::new(f.vertices)?);
        graph_from_arcs(&vs, &f.arcs)
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DigraphFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = DigraphFile::deserialize(d)?;
        Digraph::try_from(f).map_err(serde::de::Error::custom)
    }
}

impl Serialize for LabeledOrdering {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LabeledOrderingFile {
            order: self.order.iter().map(|v| v.to_string()).collect(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledOrdering {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = LabeledOrderingFile::deserialize(d)?;
        let order = f
            .order
            .into_iter()
            .map(VertexId::new)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        LabeledOrdering::new(order, f.labels).map_err(serde::de::Error::custom)
    }
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text)?;
        Instance::try_from(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

impl LabeledOrdering {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ordering serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InstanceBuilder, Side};

    #[test]
    fn instance_roundtrip_and_sorted_arcs() {
        let mut b = InstanceBuilder::new(2);
        let z = b.vertex("z");
        let a = b.vertex("a");
        let m = b.vertex("m");
        b.arc(Side::A, 1, z, a)
            .arc(Side::A, 1, a, m)
            .arc(Side::B, 2, m, z);
        let inst = b.build().unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back, inst);
        let f = InstanceFile::from(&inst);
        assert_eq!(f.pairs[0].a[0], ["a".to_string(), "m".to_string()]);
        assert!(text.find("\"k\"").unwrap() < text.find("\"vertices\"").unwrap());
    }

    #[test]
    fn rejects_unknown_fields_and_bad_k() {
        let bad = r#"{"k":1,"vertices":["u"],"pairs":[{"A":[],"B":[]}],"extra":1}"#;
        assert!(Instance::from_json(bad).is_err());
        let bad_k = r#"{"k":2,"vertices":["u"],"pairs":[{"A":[],"B":[]}]}"#;
        assert!(matches!(
            Instance::from_json(bad_k),
            Err(Error::BadK { .. })
        ));
        let self_loop = r#"{"k":1,"vertices":["u"],"pairs":[{"A":[["u","u"]],"B":[]}]}"#;
        assert!(matches!(
            Instance::from_json(self_loop),
            Err(Error::SelfLoop(_))
        ));
        let unknown = r#"{"k":1,"vertices":["u"],"pairs":[{"A":[["u","w"]],"B":[]}]}"#;
        assert!(matches!(
            Instance::from_json(unknown),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn ordering_roundtrip() {
        let o = LabeledOrdering::from_names(&["b", "a"], &[2, 1]).unwrap();
        assert_eq!(LabeledOrdering::from_json(&o.to_json()).unwrap(), o);
        assert!(LabeledOrdering::from_json(r#"{"order":["a"],"labels":[]}"#).is_err());
    }

    #[test]
    fn digraph_roundtrip() {
        let vs = Arc::new(VertexSet::new(["p", "q", "r"]).unwrap());
        let g = Digraph::from_index_arcs(vs, [(2, 0), (0, 1)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: Digraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
