//! The `.mld` mixed-link-diagram file format (JSON).
//!
//! Ports are listed counterclockwise starting at the incoming under-strand;
//! `over` names the over axis ("e1e3" for diagrams in that normal form,
//! "e0e2" accepted on input). Gate entries are ordered from the puncture
//! outward; `sign` is the crossing direction of the strand relative to the
//! listed edge-cycle traversal and `position` orders passes along the edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Crossing, Diagram, Edge, End};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize, Debug, Clone)]
struct MldFile {
    p: u32,
    q: i64,
    components: Vec<MldComponent>,
    crossings: Vec<MldCrossing>,
    gate: Vec<MldGate>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct MldComponent {
    id: u32,
    orientation: i8,
    edges: Vec<u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct MldCrossing {
    id: u32,
    ports: [u32; 4],
    over: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct MldGate {
    edge: u32,
    sign: i8,
    #[serde(deserialize_with = "de_position", serialize_with = "ser_position")]
    position: f64,
}

fn de_position<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    v.as_f64().ok_or_else(|| serde::de::Error::custom("position must be a number"))
}

fn ser_position<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.fract() == 0.0 && x.abs() < 2e9 {
        s.serialize_i64(*x as i64)
    } else {
        s.serialize_f64(*x)
    }
}

impl Diagram {
    pub fn to_mld(&self) -> String {
        let mut comps = Vec::new();
        for c in self.components() {
            comps.push(MldComponent {
                id: c.id(),
                orientation: if self.oriented { 1 } else { 0 },
                edges: c.edges.clone(),
            });
        }
        comps.sort_by_key(|c| c.id);
        let crossings = self
            .crossings
            .iter()
            .map(|(&id, cr)| MldCrossing { id, ports: cr.ports, over: "e1e3".into() })
            .collect();
        let gate = self
            .gate
            .iter()
            .map(|p| {
                let (edge, idx) = self.pass_owner(*p);
                MldGate { edge, sign: self.pass_sign[p], position: idx as f64 }
            })
            .collect();
        let file = MldFile { p: self.p, q: self.q, components: comps, crossings, gate };
        serde_json::to_string_pretty(&file).expect("mld serialization")
    }

    pub fn from_mld(text: &str) -> Result<Diagram> {
        let file: MldFile = serde_json::from_str(text).map_err(|e| Error::Parse { pos: 0, msg: e.to_string() })?;
        let mut d = Diagram::new(file.p, file.q);
        d.oriented = file.components.iter().all(|c| c.orientation != 0);

        // collect the two (crossing, port) slots of every edge id
        let mut slots: BTreeMap<u32, Vec<End>> = BTreeMap::new();
        for cr in &file.crossings {
            for (i, &e) in cr.ports.iter().enumerate() {
                slots.entry(e).or_default().push(End::new(cr.id, i as u8));
            }
        }
        for (e, s) in &slots {
            if s.len() != 2 {
                return Err(Error::InvalidDiagram(format!("edge {e} has {} crossing incidences (need 2)", s.len())));
            }
        }

        // orient each component cycle to fix edge directions
        let mut edge_dir: BTreeMap<u32, (Option<End>, Option<End>)> = BTreeMap::new();
        for comp in &file.components {
            if comp.edges.is_empty() {
                return Err(Error::InvalidDiagram(format!("component {} has no edges", comp.id)));
            }
            if comp.edges.len() == 1 && !slots.contains_key(&comp.edges[0]) {
                edge_dir.insert(comp.edges[0], (None, None));
                continue;
            }
            let try_walk = |start_from: End| -> Option<Vec<(u32, End, End)>> {
                let mut out = Vec::new();
                let mut cur_to = start_from;
                for (i, &e) in comp.edges.iter().enumerate() {
                    let ss = slots.get(&e)?;
                    let (from, to) = if i == 0 {
                        let other = if ss[0] == start_from { ss[1] } else { ss[0] };
                        (start_from, other)
                    } else {
                        // the edge must leave from the port opposite cur_to
                        let need = End::new(cur_to.c, (cur_to.port + 2) % 4);
                        if ss[0] == need {
                            (ss[0], ss[1])
                        } else if ss[1] == need {
                            (ss[1], ss[0])
                        } else {
                            return None;
                        }
                    };
                    out.push((e, from, to));
                    cur_to = to;
                }
                // closure: the first edge must continue from the last end
                let need = End::new(cur_to.c, (cur_to.port + 2) % 4);
                if out[0].1 == need {
                    Some(out)
                } else {
                    None
                }
            };
            let first = comp.edges[0];
            let ss = slots
                .get(&first)
                .ok_or_else(|| Error::InvalidDiagram(format!("edge {first} not attached to any crossing")))?
                .clone();
            let walk = try_walk(ss[0])
                .or_else(|| try_walk(ss[1]))
                .ok_or_else(|| Error::InvalidDiagram(format!("component {} is not a consistent cycle", comp.id)))?;
            for (e, from, to) in walk {
                edge_dir.insert(e, (Some(from), Some(to)));
            }
        }

        // build crossings, then rotate so port 0 is the incoming under-strand
        for cr in &file.crossings {
            let over_axis: [usize; 2] = match cr.over.as_str() {
                "e1e3" => [1, 3],
                "e0e2" => [0, 2],
                other => return Err(Error::InvalidDiagram(format!("crossing {}: bad over field {other}", cr.id))),
            };
            let arrives = |port: usize| -> Result<bool> {
                let e = cr.ports[port];
                let (_, to) = edge_dir
                    .get(&e)
                    .ok_or_else(|| Error::InvalidDiagram(format!("edge {e} not in any component")))?;
                Ok(*to == Some(End::new(cr.id, port as u8)))
            };
            let under_axis = [(over_axis[0] + 1) % 4, (over_axis[0] + 3) % 4];
            let under_in = if arrives(under_axis[0])? {
                under_axis[0]
            } else if arrives(under_axis[1])? {
                under_axis[1]
            } else {
                return Err(Error::InvalidDiagram(format!("crossing {}: under strand has no incoming end", cr.id)));
            };
            let over_in = if arrives(over_axis[0])? {
                over_axis[0]
            } else if arrives(over_axis[1])? {
                over_axis[1]
            } else {
                return Err(Error::InvalidDiagram(format!("crossing {}: over strand has no incoming end", cr.id)));
            };
            let r = under_in;
            let mut ports = [0u32; 4];
            for i in 0..4 {
                ports[i] = cr.ports[(i + r) % 4];
            }
            d.crossings.insert(cr.id, Crossing { ports, over_in: ((over_in + 4 - r) % 4) as u8 });
            // rotation changes port labels; update recorded directions
            for (e, (from, to)) in edge_dir.iter_mut() {
                let _ = e;
                for end in [from, to] {
                    if let Some(x) = end {
                        if x.c == cr.id {
                            x.port = (x.port + 4 - r as u8) % 4;
                        }
                    }
                }
            }
        }

        // edges with gate passes
        let mut passes_by_edge: BTreeMap<u32, Vec<(f64, i8, u32)>> = BTreeMap::new();
        let mut gate_ids = Vec::new();
        for g in &file.gate {
            let id = d.fresh_id();
            d.pass_sign.insert(id, g.sign);
            gate_ids.push(id);
            passes_by_edge.entry(g.edge).or_default().push((g.position, g.sign, id));
        }
        d.gate = gate_ids;
        for comp in &file.components {
            for &e in &comp.edges {
                let ends = match edge_dir.get(&e) {
                    Some((Some(f), Some(t))) => Some((*f, *t)),
                    Some((None, None)) => None,
                    _ => return Err(Error::InvalidDiagram(format!("edge {e} direction unresolved"))),
                };
                let mut ps: Vec<(f64, i8, u32)> = passes_by_edge.remove(&e).unwrap_or_default();
                ps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let passes = ps.into_iter().map(|(_, _, id)| id).collect();
                if d.edges.insert(e, Edge { ends, passes }).is_some() {
                    return Err(Error::InvalidDiagram(format!("edge {e} listed twice")));
                }
            }
        }
        if !passes_by_edge.is_empty() {
            return Err(Error::InvalidDiagram("gate references an unknown edge".into()));
        }
        let max_id = d
            .edges
            .keys()
            .chain(d.crossings.keys())
            .copied()
            .max()
            .unwrap_or(0);
        d.next_id = d.next_id.max(max_id + 1);

        // honor reversed orientations
        let rev: Vec<u32> = file
            .components
            .iter()
            .filter(|c| c.orientation < 0)
            .map(|c| c.id)
            .collect();
        let mut d = d;
        if !rev.is_empty() {
            d = d.reverse_orientation(&rev)?;
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{coil, product_of_coils, trefoil_affine, x_generator};
    use super::*;
    use crate::diagram::canon::isomorphic;

    #[test]
    fn round_trip_structural() {
        for d in [
            x_generator(5, 1, 3),
            coil(4, 1, 3),
            coil(4, 1, -2),
            trefoil_affine(2, 1),
            product_of_coils(6, 1, &[-2, 3]),
        ] {
            let text = d.to_mld();
            let back = Diagram::from_mld(&text).unwrap();
            assert!(back.validate().is_empty(), "{:?}", back.validate());
            assert!(isomorphic(&d, &back), "round trip changed the diagram");
        }
    }

    #[test]
    fn round_trip_bytes() {
        let d = coil(5, 1, 3);
        let text = d.to_mld();
        let back = Diagram::from_mld(&text).unwrap();
        assert_eq!(back.to_mld(), text);
    }

    #[test]
    fn rejects_bad_incidence() {
        let d = trefoil_affine(2, 1);
        let text = d.to_mld();
        // corrupt: duplicate an edge id inside a port list
        let bad = text.replacen("\"ports\": [", "\"ports\": [9099, ", 1);
        let bad = bad.replacen(", 9099,", ",", 0); // keep arity at 4 by dropping the last entry
        let bad = {
            // drop one element to restore arity
            let idx = bad.find("\"ports\": [9099, ").unwrap();
            let end = bad[idx..].find(']').unwrap() + idx;
            let inner: Vec<&str> = bad[idx + 10..end].trim_start_matches('[').split(',').collect();
            let truncated = inner[..4].join(",");
            format!("{}{}{}", &bad[..idx + 10], format!("[{truncated}]"), &bad[end + 1..])
        };
        assert!(Diagram::from_mld(&bad).is_err());
    }
}
