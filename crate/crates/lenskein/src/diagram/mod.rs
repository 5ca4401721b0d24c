//! Mixed link diagrams in annular form.
//!
//! The fixed surgery unknot is not stored as a component: it is the puncture
//! of the plane, and the disk it bounds appears as a ray (the "gate") from
//! the puncture. Moving strands crossing the ray carry signed gate passes;
//! the signed sum over a component is its winding number around the
//! puncture, i.e. its linking number with the fixed unknot.
//!
//! Crossings store their four incident edge-ends in counterclockwise port
//! order with port 0 the incoming under-strand; the over strand occupies
//! ports 1 and 3 and `over_in` records the port where it enters. Edges are
//! directed by the stored traversal; the `oriented` flag says whether that
//! traversal is meaningful as an orientation.

mod build;
mod canon;
mod faces;
mod mld;
mod moves;
mod slide;

pub use build::{affine_unknot, coil, product_of_coils, t_generator, trefoil_affine, x_generator};
pub use canon::canonical_signature;
pub use faces::{FaceId, Faces};
pub use moves::{MoveKind, MoveRecord, R1Params, R2Params, R3Params, SlideParams};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub type CrossingId = u32;
pub type EdgeId = u32;
pub type PassId = u32;

/// An edge end attached to a crossing port (0..4, counterclockwise).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct End {
    pub c: CrossingId,
    pub port: u8,
}

impl End {
    pub fn new(c: CrossingId, port: u8) -> Self {
        End { c, port }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Edge occupying each port; port 0 is the incoming under-strand,
    /// the under strand runs 0 -> 2, the over strand 1 -> 3 or 3 -> 1.
    pub ports: [EdgeId; 4],
    /// Port (1 or 3) where the over strand enters.
    pub over_in: u8,
}

impl Crossing {
    /// Crossing sign with respect to the stored traversals.
    pub fn sign(&self) -> i8 {
        if self.over_in == 3 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// (from, to) along the stored traversal; `None` for a free loop.
    pub ends: Option<(End, End)>,
    /// Gate passes along the traversal, in order.
    pub passes: Vec<PassId>,
}

impl Edge {
    fn free_loop(passes: Vec<PassId>) -> Self {
        Edge { ends: None, passes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub p: u32,
    pub q: i64,
    pub(crate) crossings: BTreeMap<CrossingId, Crossing>,
    pub(crate) edges: BTreeMap<EdgeId, Edge>,
    pub(crate) pass_sign: BTreeMap<PassId, i8>,
    /// Gate passes ordered from the puncture outward.
    pub(crate) gate: Vec<PassId>,
    pub(crate) oriented: bool,
    pub(crate) next_id: u32,
}

/// A component: edges in traversal order, starting at the smallest edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub edges: Vec<EdgeId>,
}

impl Component {
    pub fn id(&self) -> EdgeId {
        self.edges.iter().copied().min().unwrap()
    }
}

impl Diagram {
    pub fn new(p: u32, q: i64) -> Self {
        Diagram {
            p,
            q,
            crossings: BTreeMap::new(),
            edges: BTreeMap::new(),
            pass_sign: BTreeMap::new(),
            gate: Vec::new(),
            oriented: true,
            next_id: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn oriented(&self) -> bool {
        self.oriented
    }

    pub fn set_oriented(&mut self, oriented: bool) {
        self.oriented = oriented;
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn crossings(&self) -> impl Iterator<Item = (CrossingId, &Crossing)> {
        self.crossings.iter().map(|(&i, c)| (i, c))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().map(|(&i, e)| (i, e))
    }

    pub fn crossing(&self, c: CrossingId) -> &Crossing {
        &self.crossings[&c]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[&e]
    }

    pub fn gate(&self) -> &[PassId] {
        &self.gate
    }

    pub fn pass_sign(&self, p: PassId) -> i8 {
        self.pass_sign[&p]
    }

    pub(crate) fn fresh_id(&mut self) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// The edge end attached at (c, port).
    pub fn end_at(&self, c: CrossingId, port: u8) -> (EdgeId, bool) {
        let e = self.crossings[&c].ports[port as usize];
        let edge = &self.edges[&e];
        let (from, to) = edge.ends.expect("edge at a crossing has endpoints");
        let target = End::new(c, port);
        if from == target {
            (e, true) // edge leaves here
        } else {
            debug_assert_eq!(to, target, "port incidence mismatch");
            (e, false) // edge arrives here
        }
    }

    /// Continue a strand arriving at (c, port): leaves at the opposite port.
    pub fn strand_continue(&self, c: CrossingId, port: u8) -> (EdgeId, End) {
        let out_port = (port + 2) % 4;
        let e = self.crossings[&c].ports[out_port as usize];
        (e, End::new(c, out_port))
    }

    /// Components as edge cycles following the strand pairing 0<->2, 1<->3.
    pub fn components(&self) -> Vec<Component> {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        let mut out = Vec::new();
        for (&start, edge) in &self.edges {
            if seen.contains(&start) {
                continue;
            }
            if edge.ends.is_none() {
                seen.insert(start);
                out.push(Component { edges: vec![start] });
                continue;
            }
            let mut cycle = Vec::new();
            let mut e = start;
            loop {
                cycle.push(e);
                seen.insert(e);
                let (_, to) = self.edges[&e].ends.unwrap();
                let (next, _) = self.strand_continue(to.c, to.port);
                e = next;
                if e == start {
                    break;
                }
            }
            out.push(Component { edges: cycle });
        }
        out
    }

    /// The component containing `e`.
    pub fn component_of(&self, e: EdgeId) -> Component {
        self.components()
            .into_iter()
            .find(|k| k.edges.contains(&e))
            .expect("edge belongs to a component")
    }

    /// Winding of one component: signed gate passes along it.
    pub fn component_winding(&self, comp: &Component) -> i64 {
        comp.edges
            .iter()
            .flat_map(|e| self.edges[e].passes.iter())
            .map(|p| self.pass_sign[p] as i64)
            .sum()
    }

    /// Homology class of the moving link: total signed gate passes.
    /// Requires orientations.
    pub fn linking_with_fixed(&self) -> Result<i64> {
        if !self.oriented {
            return Err(Error::Unoriented("diagram".into()));
        }
        Ok(self.gate.iter().map(|p| self.pass_sign[p] as i64).sum())
    }

    /// Sum of crossing signs over self-crossings of the moving link
    /// (with respect to the stored traversals).
    pub fn writhe(&self) -> i64 {
        self.crossings.values().map(|c| c.sign() as i64).sum()
    }

    /// Self-writhe of a single component: crossings where both strands
    /// belong to it (orientation independent).
    pub fn self_writhe(&self, comp: &Component) -> i64 {
        let edges: BTreeSet<EdgeId> = comp.edges.iter().copied().collect();
        self.crossings
            .values()
            .filter(|c| c.ports.iter().all(|e| edges.contains(e)))
            .map(|c| c.sign() as i64)
            .sum()
    }

    /// Flip all over/under data (the mirror under the self-homeomorphism
    /// reversing the meridian).
    pub fn mirror(&self) -> Self {
        let mut d = self.clone();
        let ids: Vec<CrossingId> = d.crossings.keys().copied().collect();
        for c in ids {
            d.rotate_crossing_labels(c, d.crossings[&c].over_in);
        }
        d
    }

    /// Relabel ports of crossing `c` so that old port `r` becomes port 0.
    /// Updates all edge ends; `over_in` is re-derived.
    fn rotate_crossing_labels(&mut self, c: CrossingId, r: u8) {
        if r == 0 {
            return;
        }
        let cr = self.crossings[&c].clone();
        let mut ports = [0; 4];
        for i in 0..4u8 {
            ports[i as usize] = cr.ports[((i + r) % 4) as usize];
        }
        // move edge end labels
        let mut touched: Vec<(EdgeId, End, End)> = Vec::new();
        for old_port in 0..4u8 {
            let new_port = (old_port + 4 - r) % 4;
            if new_port == old_port {
                continue;
            }
            let e = cr.ports[old_port as usize];
            touched.push((e, End::new(c, old_port), End::new(c, new_port)));
        }
        for (e, old, new) in touched {
            let edge = self.edges.get_mut(&e).unwrap();
            let (from, to) = edge.ends.unwrap();
            // an edge may touch the crossing twice; remap both ends exactly once
            let nf = if from == old { new } else { from };
            let nt = if to == old { new } else { to };
            edge.ends = Some((nf, nt));
        }
        let new_over_in = (self.crossings[&c].over_in + 4 - r) % 4;
        let cross = self.crossings.get_mut(&c).unwrap();
        cross.ports = ports;
        cross.over_in = new_over_in;
    }

    /// Normalize a crossing after direction changes: port 0 must again be
    /// the incoming under-strand and `over_in` the over entry.
    /// `under_reversed`/`over_reversed` say which strands flipped direction.
    fn renormalize_crossing(&mut self, c: CrossingId, under_reversed: bool, over_reversed: bool) {
        let over_in = self.crossings[&c].over_in;
        if over_reversed {
            self.crossings.get_mut(&c).unwrap().over_in = (over_in + 2) % 4;
        }
        if under_reversed {
            self.rotate_crossing_labels(c, 2);
        }
    }

    /// Reverse the stored traversal (orientation) of the given components.
    pub fn reverse_components(&mut self, comps: &[Component]) {
        let edges: BTreeSet<EdgeId> = comps.iter().flat_map(|k| k.edges.iter().copied()).collect();
        for e in &edges {
            let edge = self.edges.get_mut(e).unwrap();
            if let Some((from, to)) = edge.ends {
                edge.ends = Some((to, from));
            }
            edge.passes.reverse();
            for p in &edge.passes {
                let s = self.pass_sign.get_mut(p).unwrap();
                *s = -*s;
            }
        }
        let ids: Vec<CrossingId> = self.crossings.keys().copied().collect();
        for c in ids {
            let cr = &self.crossings[&c];
            let under_rev = edges.contains(&cr.ports[0]);
            let over_rev = edges.contains(&cr.ports[cr.over_in as usize]);
            self.renormalize_crossing(c, under_rev, over_rev);
        }
    }

    /// Reverse orientation of the components identified by the given ids
    /// (smallest edge id of the component).
    pub fn reverse_orientation(&self, component_ids: &[u32]) -> Result<Self> {
        let mut d = self.clone();
        let comps = d.components();
        let mut chosen = Vec::new();
        for id in component_ids {
            match comps.iter().find(|k| k.id() == *id) {
                Some(k) => chosen.push(k.clone()),
                None => return Err(Error::UnknownComponent(*id)),
            }
        }
        d.reverse_components(&chosen);
        Ok(d)
    }

    /// Planar reflection across the gate ray: counterclockwise port orders
    /// reverse, pass signs negate, gate order is preserved.
    fn reflect(&self) -> Self {
        let mut d = self.clone();
        let ids: Vec<CrossingId> = d.crossings.keys().copied().collect();
        for c in ids {
            let cr = d.crossings[&c].clone();
            let ports = [cr.ports[0], cr.ports[3], cr.ports[2], cr.ports[1]];
            // relabel ends: ports 1 and 3 swap
            let e1 = cr.ports[1];
            let e3 = cr.ports[3];
            let remap = |d: &mut Diagram, e: EdgeId, old: End, new: End| {
                let edge = d.edges.get_mut(&e).unwrap();
                let (from, to) = edge.ends.unwrap();
                let nf = if from == old { new } else { from };
                let nt = if to == old { new } else { to };
                edge.ends = Some((nf, nt));
            };
            if e1 == e3 {
                // loop edge across ports 1 and 3: swap both ends
                let edge = d.edges.get_mut(&e1).unwrap();
                let (from, to) = edge.ends.unwrap();
                let fix = |end: End| {
                    if end.c == c && end.port == 1 {
                        End::new(c, 3)
                    } else if end.c == c && end.port == 3 {
                        End::new(c, 1)
                    } else {
                        end
                    }
                };
                edge.ends = Some((fix(from), fix(to)));
            } else {
                remap(&mut d, e1, End::new(c, 1), End::new(c, 3));
                remap(&mut d, e3, End::new(c, 3), End::new(c, 1));
            }
            let cross = d.crossings.get_mut(&c).unwrap();
            cross.ports = ports;
            cross.over_in = if cr.over_in == 1 { 3 } else { 1 };
        }
        for s in d.pass_sign.values_mut() {
            *s = -*s;
        }
        d
    }

    /// The flip: reverse both the fixed and the moving orientations
    /// (reflection across the ray, over/under swap, then orientation
    /// reversal of every moving component). Gate order and pass signs are
    /// preserved overall.
    pub fn flip(&self) -> Self {
        let mut d = self.reflect().mirror();
        let comps = d.components();
        d.reverse_components(&comps);
        d
    }

    /// Structural and planarity validation; returns human-readable
    /// violations (empty = valid).
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();

        // port incidences: every (crossing, port) covered by exactly one edge end
        let mut incidence: BTreeMap<End, Vec<EdgeId>> = BTreeMap::new();
        for (&eid, e) in &self.edges {
            if let Some((from, to)) = e.ends {
                incidence.entry(from).or_default().push(eid);
                incidence.entry(to).or_default().push(eid);
            }
        }
        for (&cid, cr) in &self.crossings {
            if cr.over_in != 1 && cr.over_in != 3 {
                out.push(format!("crossing {cid}: over_in must be 1 or 3"));
            }
            for port in 0..4u8 {
                let end = End::new(cid, port);
                match incidence.get(&end) {
                    Some(v) if v.len() == 1 => {
                        if v[0] != cr.ports[port as usize] {
                            out.push(format!("crossing {cid} port {port}: ports table disagrees with edge ends"));
                        }
                    }
                    Some(v) => out.push(format!("crossing {cid} port {port}: used by {} edge ends", v.len())),
                    None => out.push(format!("crossing {cid} port {port}: no incident edge end")),
                }
            }
            // traversal consistency: incoming ports are 0 and over_in
            for port in [0u8, cr.over_in] {
                let e = cr.ports[port as usize];
                if let Some(edge) = self.edges.get(&e) {
                    if let Some((_, to)) = edge.ends {
                        let (e2, fwd) = if to == End::new(cid, port) { (e, false) } else { (e, true) };
                        let _ = (e2, fwd);
                        if to != End::new(cid, port) {
                            // the edge at an incoming port must arrive here
                            if edge.ends.map(|(f, _)| f) == Some(End::new(cid, port)) {
                                out.push(format!("crossing {cid} port {port}: expected incoming strand, found outgoing"));
                            }
                        }
                    }
                } else {
                    out.push(format!("crossing {cid}: missing edge {e}"));
                }
            }
        }
        for (&eid, e) in &self.edges {
            if let Some((from, to)) = e.ends {
                for end in [from, to] {
                    match self.crossings.get(&end.c) {
                        Some(cr) => {
                            if cr.ports[end.port as usize] != eid {
                                out.push(format!("edge {eid}: end {end:?} not registered at the crossing"));
                            }
                        }
                        None => out.push(format!("edge {eid}: dangling crossing {}", end.c)),
                    }
                }
            }
            for p in &e.passes {
                if !self.pass_sign.contains_key(p) {
                    out.push(format!("edge {eid}: unknown pass {p}"));
                }
            }
        }
        let edge_passes: BTreeSet<PassId> = self.edges.values().flat_map(|e| e.passes.iter().copied()).collect();
        let gate_passes: BTreeSet<PassId> = self.gate.iter().copied().collect();
        if edge_passes != gate_passes {
            out.push("gate list and edge pass lists disagree".into());
        }
        if self.gate.len() != gate_passes.len() {
            out.push("gate list has duplicates".into());
        }
        for s in self.pass_sign.values() {
            if *s != 1 && *s != -1 {
                out.push("pass sign must be +1 or -1".into());
            }
        }
        if !out.is_empty() {
            return out;
        }

        // Euler characteristic per connected piece (puncture is a marked face)
        let faces = Faces::build(self);
        for piece in self.pieces() {
            let v = piece.crossings.len();
            if v == 0 {
                continue; // bare loop, trivially planar
            }
            let e = piece.edges.len();
            let f = faces.count_for(&piece.edges);
            let euler = v as i64 - e as i64 + f as i64;
            if euler != 2 {
                out.push(format!("piece at edge {}: V - E + F = {} (expected 2): not planar", piece.edges.iter().next().unwrap(), euler));
            }
        }
        if !out.is_empty() {
            return out;
        }

        // gate corridor must trace consistently piece by piece
        for piece in self.pieces() {
            let passes: Vec<PassId> = self.gate.iter().copied().filter(|p| {
                self.edges
                    .iter()
                    .any(|(eid, e)| piece.edges.contains(eid) && e.passes.contains(p))
            }).collect();
            if passes.len() < 2 {
                continue;
            }
            if faces.corridor_trace(self, &passes).is_none() {
                out.push(format!(
                    "gate corridor inconsistent for the piece containing edge {}",
                    piece.edges.iter().next().unwrap()
                ));
            }
        }
        out
    }

    /// Connected pieces of the underlying 4-valent graph.
    pub(crate) fn pieces(&self) -> Vec<Piece> {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.edges.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut edges = BTreeSet::new();
            let mut crossings = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(e) = stack.pop() {
                if !edges.insert(e) {
                    continue;
                }
                seen.insert(e);
                if let Some((from, to)) = self.edges[&e].ends {
                    for end in [from, to] {
                        if crossings.insert(end.c) {
                            for e2 in self.crossings[&end.c].ports {
                                stack.push(e2);
                            }
                        }
                    }
                }
            }
            out.push(Piece { edges, crossings });
        }
        out
    }

    /// Remove a crossing, reconnecting both strands straight through.
    /// Pass lists merge in traversal order. Used by untangling moves.
    pub(crate) fn splice_out_crossing(&mut self, c: CrossingId) {
        let cr = self.crossings.remove(&c).expect("crossing exists");
        // two joins: under out->in continuation, over out->in continuation
        let joins = [
            (End::new(c, 2), End::new(c, 0)),
            (End::new(c, (cr.over_in + 2) % 4), End::new(c, cr.over_in)),
        ];
        for (out_end, in_end) in joins {
            // the edge leaving at out_end and the edge arriving at in_end
            let e_out = self.edge_with_from(out_end);
            let e_in = self.edge_with_to(in_end);
            if e_out == e_in {
                // strand closes into a free loop
                let edge = self.edges.get_mut(&e_out).unwrap();
                edge.ends = None;
            } else {
                let out_edge = self.edges.remove(&e_out).unwrap();
                let in_edge = self.edges.get_mut(&e_in).unwrap();
                in_edge.passes.extend(out_edge.passes);
                let (_, out_to) = out_edge.ends.unwrap();
                let (in_from, _) = in_edge.ends.unwrap();
                in_edge.ends = Some((in_from, out_to));
                // fix the far end's registration
                if out_to.c != c {
                    let cr2 = self.crossings.get_mut(&out_to.c).unwrap();
                    cr2.ports[out_to.port as usize] = e_in;
                } else {
                    // the strand re-enters the crossing being removed; the
                    // second join below will see the merged edge
                }
            }
        }
    }

    pub(crate) fn edge_with_from(&self, end: End) -> EdgeId {
        *self
            .edges
            .iter()
            .find(|(_, e)| e.ends.map(|(f, _)| f) == Some(end))
            .map(|(id, _)| id)
            .expect("an edge leaves this end")
    }

    pub(crate) fn edge_with_to(&self, end: End) -> EdgeId {
        *self
            .edges
            .iter()
            .find(|(_, e)| e.ends.map(|(_, t)| t) == Some(end))
            .map(|(id, _)| id)
            .expect("an edge arrives at this end")
    }

    /// Split `e` after `k` of its passes; returns (head, tail). The head
    /// keeps `e`'s id and from-end, the tail gets a fresh id and the to-end.
    /// Both open ends are left dangling for the caller to wire.
    pub(crate) fn split_edge(&mut self, e: EdgeId, k: usize) -> (EdgeId, EdgeId) {
        let edge = self.edges.get_mut(&e).unwrap();
        let tail_passes = edge.passes.split_off(k);
        let ends = edge.ends;
        let tail_id = self.fresh_id();
        match ends {
            Some((_, to)) => {
                let head = self.edges.get_mut(&e).unwrap();
                let (from, _) = head.ends.unwrap();
                head.ends = Some((from, End::new(u32::MAX, 0)));
                self.edges.insert(tail_id, Edge { ends: Some((End::new(u32::MAX, 0), to)), passes: tail_passes });
            }
            None => {
                // cutting a free loop: one open strand, cyclic passes rotated
                let head = self.edges.get_mut(&e).unwrap();
                let mut passes = std::mem::take(&mut head.passes);
                let mut rest = tail_passes;
                rest.append(&mut passes);
                head.passes = rest;
                head.ends = Some((End::new(u32::MAX, 0), End::new(u32::MAX, 0)));
                return (e, e);
            }
        }
        (e, tail_id)
    }

    pub(crate) fn set_edge_from(&mut self, e: EdgeId, end: End) {
        let edge = self.edges.get_mut(&e).unwrap();
        let (_, to) = edge.ends.unwrap();
        edge.ends = Some((end, to));
        self.crossings.get_mut(&end.c).unwrap().ports[end.port as usize] = e;
    }

    pub(crate) fn set_edge_to(&mut self, e: EdgeId, end: End) {
        let edge = self.edges.get_mut(&e).unwrap();
        let (from, _) = edge.ends.unwrap();
        edge.ends = Some((from, end));
        self.crossings.get_mut(&end.c).unwrap().ports[end.port as usize] = e;
    }

    pub(crate) fn new_crossing(&mut self, over_in: u8) -> CrossingId {
        let id = self.fresh_id();
        self.crossings.insert(id, Crossing { ports: [u32::MAX; 4], over_in });
        id
    }

    pub(crate) fn new_edge(&mut self) -> EdgeId {
        let id = self.fresh_id();
        self.edges.insert(id, Edge { ends: Some((End::new(u32::MAX, 0), End::new(u32::MAX, 0))), passes: vec![] });
        id
    }

    pub(crate) fn new_free_loop(&mut self, passes: Vec<PassId>) -> EdgeId {
        let id = self.fresh_id();
        self.edges.insert(id, Edge::free_loop(passes));
        id
    }

    pub(crate) fn new_pass(&mut self, sign: i8) -> PassId {
        let id = self.fresh_id();
        self.pass_sign.insert(id, sign);
        id
    }

    /// Remove a pass everywhere (gate, sign table, owning edge).
    pub(crate) fn remove_pass(&mut self, p: PassId) {
        self.gate.retain(|x| *x != p);
        self.pass_sign.remove(&p);
        for e in self.edges.values_mut() {
            e.passes.retain(|x| *x != p);
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub edges: BTreeSet<EdgeId>,
    pub crossings: BTreeSet<CrossingId>,
}
