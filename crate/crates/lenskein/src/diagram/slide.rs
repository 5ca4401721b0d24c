//! The slide move for q = 1: band-sum an arc bordering the outer region
//! with the surgery curve.
//!
//! The surgery curve is drawn as a coil of p wraps around the puncture
//! (p - 1 self-crossings, the return strand under the spiral, writhe
//! -(p-1)) together with one meridian excursion running alongside the gate
//! ray: one strand crosses every lane over, the other under. A single
//! negative kink accounts for the surface framing of the curve, giving the
//! template total self-writhe -p. The two oriented flavours traverse the
//! same picture in opposite directions, which exchanges the roles of the
//! two excursion strands and reverses the new gate-pass signs.

use super::faces::{Dart, Faces};
use super::moves::{MoveKind, MoveRecord, SlideParams};
use super::{CrossingId, Diagram, EdgeId, End, PassId};
use crate::error::{Error, Result};

/// Chain-threading state while laying down the template.
struct Chain {
    head: EdgeId,
    prev_out: Option<End>,
    pending: Vec<PassId>,
    created: Vec<CrossingId>,
}

impl Diagram {
    /// Edges with a free approach to the gate region: edges of the
    /// gate-owning piece bordering the outer face, and every edge of a
    /// pass-free floating piece. With an empty gate every edge qualifies.
    pub fn slide_sites(&self) -> Vec<EdgeId> {
        if self.gate.is_empty() {
            return self.edges.keys().copied().collect();
        }
        let faces = Faces::build(self);
        let Some(outer) = faces.outer_face(self) else {
            return vec![];
        };
        let last = *self.gate.last().unwrap();
        let gate_piece = self
            .pieces()
            .into_iter()
            .find(|p| {
                p.edges
                    .iter()
                    .any(|e| self.edges[e].passes.contains(&last))
            })
            .expect("gate pass has an owner piece");
        let mut sites = Vec::new();
        for (&e, edge) in &self.edges {
            if gate_piece.edges.contains(&e) {
                let (fa, fb) = faces.faces_of_edge(e);
                if fa == outer || fb == outer {
                    sites.push(e);
                }
            } else {
                // floating pieces may be placed with any face outward
                let piece = self.pieces().into_iter().find(|p| p.edges.contains(&e)).unwrap();
                let has_pass = piece.edges.iter().any(|e2| !self.edges[e2].passes.is_empty());
                if !has_pass {
                    sites.push(e);
                }
                let _ = edge;
            }
        }
        sites
    }

    pub(crate) fn slide(&mut self, params: &SlideParams) -> Result<MoveRecord> {
        if self.q != 1 {
            return Err(Error::UnsupportedSlide(self.q));
        }
        let edge = self.edges.get(&params.edge).ok_or(Error::NotGateAdjacent)?;
        if params.cut_slot > edge.passes.len() {
            return Err(Error::PatternMismatch("SL"));
        }
        if !self.slide_sites().contains(&params.edge) {
            return Err(Error::NotGateAdjacent);
        }
        let sigma: i8 = if params.with_fixed { 1 } else { -1 };
        let wraps = self.p as usize;
        let old_gate = self.gate.clone();

        // new passes w_1 (innermost) .. w_p, prepended to the gate
        let ws: Vec<PassId> = (0..wraps).map(|_| self.new_pass(sigma)).collect();
        let mut new_gate = ws.clone();
        new_gate.extend(old_gate.iter().copied());
        self.gate = new_gate;

        let (head, tail) = self.split_edge(params.edge, params.cut_slot);
        let mut chain = Chain { head, prev_out: None, pending: Vec::new(), created: Vec::new() };

        // --- outbound excursion leg: crosses every lane, outermost first ---
        // (over for the with-fixed flavour, under for the against flavour)
        let mut out_crossings: Vec<(PassId, CrossingId, i8)> = Vec::new();
        for &lane in old_gate.iter().rev() {
            let s = self.pass_sign[&lane];
            let (owner, idx) = self.pass_owner(lane);
            let slot = if s == 1 { idx } else { idx + 1 };
            let from_left = s == -1;
            let ins = self.insert_crossing(owner, slot, from_left, sigma == 1);
            self.connect(&mut chain, ins.mover_in);
            chain.prev_out = Some(ins.mover_out);
            chain.created.push(ins.crossing);
            out_crossings.push((lane, ins.crossing, s));
        }

        // --- coil ---
        let coil: Vec<CrossingId> = (0..wraps.saturating_sub(1)).map(|_| self.new_crossing(1)).collect();
        chain.created.extend(coil.iter().copied());
        if sigma == 1 {
            // spiral inward over the return (passes w_p .. w_1), then the
            // return outward under the arcs, then the framing kink
            for j in (0..wraps).rev() {
                chain.pending.push(ws[j]);
                if j > 0 {
                    let c = coil[j - 1];
                    self.connect(&mut chain, End::new(c, 1)); // arc in
                    chain.prev_out = Some(End::new(c, 3));
                }
            }
            // turn at the bottom, then return outward: under at c_1..c_{p-1}
            for &c in coil.iter() {
                self.connect(&mut chain, End::new(c, 0)); // return in
                chain.prev_out = Some(End::new(c, 2));
            }
            self.add_chain_kink(&mut chain);
        } else {
            // kink first, the return inward under the arcs, the turn with
            // w_1, then the spiral outward (passes w_2 .. w_p)
            self.add_chain_kink(&mut chain);
            for &c in coil.iter().rev() {
                self.connect(&mut chain, End::new(c, 0));
                chain.prev_out = Some(End::new(c, 2));
            }
            for (j, &c) in coil.iter().enumerate() {
                chain.pending.push(ws[j]);
                self.connect(&mut chain, End::new(c, 1));
                chain.prev_out = Some(End::new(c, 3));
            }
            chain.pending.push(ws[wraps - 1]);
        }

        // --- inbound excursion leg: innermost lane first ---
        for &(lane, out_c, s) in out_crossings.iter().rev() {
            // the target strand's entry port at the outbound crossing
            let cr = &self.crossings[&out_c];
            let target_in: u8 = if sigma == 1 { 0 } else { cr.over_in };
            let target_out = (target_in + 2) % 4;
            let (owner, slot) = if s == 1 {
                let e = self.edge_with_to(End::new(out_c, target_in));
                let n = self.edges[&e].passes.len();
                (e, n)
            } else {
                (self.edge_with_from(End::new(out_c, target_out)), 0)
            };
            let from_left = s == 1;
            let ins = self.insert_crossing(owner, slot, from_left, sigma == -1);
            self.connect(&mut chain, ins.mover_in);
            chain.prev_out = Some(ins.mover_out);
            chain.created.push(ins.crossing);
            let _ = lane;
        }

        // close the chain into the tail
        let prev = chain.prev_out.expect("template created at least one crossing");
        let pending = std::mem::take(&mut chain.pending);
        let tail_edge = self.edges.get_mut(&tail).unwrap();
        for (i, p) in pending.into_iter().enumerate() {
            tail_edge.passes.insert(i, p);
        }
        self.set_edge_from(tail, prev);

        Ok(MoveRecord::new(MoveKind::SlideUndo { crossings: chain.created.clone(), passes: ws }))
    }

    /// Wire the chain into `next_in`, creating a connector edge carrying the
    /// pending passes (or extending the cut head for the first attachment).
    fn connect(&mut self, chain: &mut Chain, next_in: End) {
        let pending = std::mem::take(&mut chain.pending);
        match chain.prev_out {
            None => {
                let head = self.edges.get_mut(&chain.head).unwrap();
                head.passes.extend(pending);
                self.set_edge_to(chain.head, next_in);
            }
            Some(prev) => {
                let leg = self.new_edge();
                self.edges.get_mut(&leg).unwrap().passes = pending;
                self.set_edge_from(leg, prev);
                self.set_edge_to(leg, next_in);
            }
        }
    }

    /// A negative kink on the chain (framing correction).
    fn add_chain_kink(&mut self, chain: &mut Chain) {
        // variant (sign -1, side +1): loop 2 -> 1, through in 0 out 3
        let c = self.new_crossing(1);
        chain.created.push(c);
        self.connect(chain, End::new(c, 0));
        let l = self.new_edge();
        self.set_edge_from(l, End::new(c, 2));
        self.set_edge_to(l, End::new(c, 1));
        chain.prev_out = Some(End::new(c, 3));
    }

    /// Owner edge and in-edge index of a gate pass.
    pub(crate) fn pass_owner(&self, pass: PassId) -> (EdgeId, usize) {
        for (&e, edge) in &self.edges {
            if let Some(idx) = edge.passes.iter().position(|&p| p == pass) {
                return (e, idx);
            }
        }
        panic!("pass {pass} has no owner");
    }
}

#[cfg(test)]
mod tests {
    use super::super::{affine_unknot, coil, x_generator};
    use super::*;

    fn slide_once(d: &Diagram, with_fixed: bool) -> (Diagram, MoveRecord) {
        let sites = d.slide_sites();
        assert!(!sites.is_empty(), "no slide site");
        let e = sites[0];
        let rec = MoveRecord::new(MoveKind::Slide(SlideParams { edge: e, cut_slot: 0, with_fixed }));
        let (d2, inv) = d.apply_move(&rec).unwrap();
        (d2, inv)
    }

    #[test]
    fn slide_affine_unknot() {
        for p in [1u32, 2, 5] {
            for wf in [true, false] {
                let d = affine_unknot(p, 1);
                let (s, _) = slide_once(&d, wf);
                assert_eq!(s.validate(), Vec::<String>::new(), "p={p} wf={wf}");
                let expect = if wf { p as i64 } else { -(p as i64) };
                assert_eq!(s.linking_with_fixed().unwrap(), expect);
                // coil self-crossings plus the framing kink: writhe -p
                assert_eq!(s.writhe(), -(p as i64), "p={p} wf={wf}");
                assert_eq!(s.crossing_count(), p as usize);
            }
        }
    }

    #[test]
    fn slide_changes_class_by_p() {
        for p in [2u32, 3, 5] {
            for wf in [true, false] {
                let d = x_generator(p, 1, 3);
                let before = d.linking_with_fixed().unwrap();
                let (s, _) = slide_once(&d, wf);
                assert!(s.validate().is_empty(), "p={p} wf={wf}: {:?}", s.validate());
                let after = s.linking_with_fixed().unwrap();
                assert_eq!((after - before).abs(), p as i64);
            }
        }
    }

    #[test]
    fn slide_crossing_count() {
        // template adds 2k lane crossings + (p-1) coil crossings + 1 kink
        let d = x_generator(5, 1, 3);
        let (s, _) = slide_once(&d, false);
        assert_eq!(s.crossing_count(), 2 * 3 + 5 - 1 + 1);
        assert_eq!(s.gate().len(), 3 + 5);
    }

    #[test]
    fn slide_undo_restores() {
        use super::super::canon::isomorphic;
        for (d, wf) in [
            (x_generator(3, 1, 2), true),
            (coil(2, 1, 2), false),
            (affine_unknot(4, 1), true),
        ] {
            let (s, inv) = slide_once(&d, wf);
            let (restored, _) = s.apply_move(&inv).unwrap();
            assert!(restored.validate().is_empty());
            assert!(isomorphic(&restored, &d), "undo failed");
        }
    }

    #[test]
    fn slide_rejects_general_q() {
        let d = x_generator(5, 2, 2);
        let e = *d.edges.keys().next().unwrap();
        let rec = MoveRecord::new(MoveKind::Slide(SlideParams { edge: e, cut_slot: 0, with_fixed: true }));
        assert!(matches!(d.apply_move(&rec), Err(Error::UnsupportedSlide(2))));
    }
}
