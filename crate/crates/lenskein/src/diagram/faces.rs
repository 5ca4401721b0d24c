use std::collections::{BTreeMap, BTreeSet};

use super::{Diagram, EdgeId, End, PassId};

/// A directed edge side. The face of a dart lies on its left; faces are the
/// orbits of the left-hand-wall walk in the counterclockwise rotation system.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Dart {
    pub edge: EdgeId,
    pub forward: bool,
}

pub type FaceId = usize;

#[derive(Clone, Debug)]
pub struct Faces {
    face_of: BTreeMap<Dart, FaceId>,
    pub walks: Vec<Vec<Dart>>,
}

impl Faces {
    pub fn build(d: &Diagram) -> Self {
        let mut face_of = BTreeMap::new();
        let mut walks = Vec::new();
        let mut darts: Vec<Dart> = Vec::new();
        for (&e, edge) in &d.edges {
            darts.push(Dart { edge: e, forward: true });
            if edge.ends.is_some() || true {
                darts.push(Dart { edge: e, forward: false });
            }
        }
        for &start in &darts {
            if face_of.contains_key(&start) {
                continue;
            }
            let id = walks.len();
            let mut walk = Vec::new();
            let mut cur = start;
            loop {
                face_of.insert(cur, id);
                walk.push(cur);
                cur = Self::next_dart(d, cur);
                if cur == start {
                    break;
                }
            }
            walks.push(walk);
        }
        Faces { face_of, walks }
    }

    /// Left-hand-wall successor: at the end of the dart, leave along the
    /// next port counterclockwise. Free loops close on themselves.
    fn next_dart(d: &Diagram, dart: Dart) -> Dart {
        let edge = &d.edges[&dart.edge];
        let Some((from, to)) = edge.ends else {
            return dart;
        };
        let end: End = if dart.forward { to } else { from };
        let out_port = (end.port + 1) % 4;
        let e2 = d.crossings[&end.c].ports[out_port as usize];
        let out_end = End::new(end.c, out_port);
        let (f2, t2) = d.edges[&e2].ends.unwrap();
        if f2 == out_end {
            Dart { edge: e2, forward: true }
        } else {
            debug_assert_eq!(t2, out_end);
            Dart { edge: e2, forward: false }
        }
    }

    pub fn face(&self, dart: Dart) -> FaceId {
        self.face_of[&dart]
    }

    pub fn faces_of_edge(&self, e: EdgeId) -> (FaceId, FaceId) {
        (
            self.face_of[&Dart { edge: e, forward: true }],
            self.face_of[&Dart { edge: e, forward: false }],
        )
    }

    pub fn count_for(&self, edges: &BTreeSet<EdgeId>) -> usize {
        let mut seen = BTreeSet::new();
        for (&dart, &f) in &self.face_of {
            if edges.contains(&dart.edge) {
                seen.insert(f);
            }
        }
        seen.len()
    }

    /// Trace the gate corridor through the faces: returns the face sequence
    /// `[f_0, .., f_k]` (before pass 0 .. after the last pass) if consistent.
    /// Both starting sides are tried; a trace from the far end is accepted
    /// reversed so the orientation of the stored gate order is respected.
    pub fn corridor_trace(&self, d: &Diagram, passes: &[PassId]) -> Option<Vec<FaceId>> {
        if passes.is_empty() {
            return Some(vec![]);
        }
        let owner = |p: PassId| -> EdgeId {
            d.edges
                .iter()
                .find(|(_, e)| e.passes.contains(&p))
                .map(|(&id, _)| id)
                .expect("pass has an owner")
        };
        let edges: Vec<EdgeId> = passes.iter().map(|&p| owner(p)).collect();
        let (fa, fb) = self.faces_of_edge(edges[0]);
        'start: for f0 in [fa, fb] {
            let mut seq = vec![f0];
            let mut cur = f0;
            for &e in &edges {
                let (x, y) = self.faces_of_edge(e);
                let next = if cur == x {
                    y
                } else if cur == y {
                    x
                } else {
                    continue 'start;
                };
                seq.push(next);
                cur = next;
            }
            return Some(seq);
        }
        None
    }

    /// The outer face: the face after the outermost gate pass of the
    /// gate-owning piece, or `None` when the gate is empty (every face of
    /// an affine diagram may serve as the outer region).
    pub fn outer_face(&self, d: &Diagram) -> Option<FaceId> {
        let last = *d.gate.last()?;
        let e = d
            .edges
            .iter()
            .find(|(_, edge)| edge.passes.contains(&last))
            .map(|(&id, _)| id)?;
        // restrict the corridor to the piece containing the outermost pass
        let piece = d
            .pieces()
            .into_iter()
            .find(|p| p.edges.contains(&e))
            .expect("edge in a piece");
        let passes: Vec<PassId> = d
            .gate
            .iter()
            .copied()
            .filter(|p| {
                d.edges
                    .iter()
                    .any(|(eid, edge)| piece.edges.contains(eid) && edge.passes.contains(p))
            })
            .collect();
        self.corridor_trace(d, &passes).map(|seq| *seq.last().unwrap())
    }
}
