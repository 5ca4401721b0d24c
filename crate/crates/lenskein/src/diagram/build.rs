use super::{Diagram, End};

/// The affine unknot: one free loop, no gate passes.
pub fn affine_unknot(p: u32, q: i64) -> Diagram {
    let mut d = Diagram::new(p, q);
    d.new_free_loop(vec![]);
    d
}

/// The generator x^n: n disjoint essential circles, innermost first in the
/// gate order. x^0 is the affine unknot.
pub fn x_generator(p: u32, q: i64, n: u32) -> Diagram {
    if n == 0 {
        return affine_unknot(p, q);
    }
    let mut d = Diagram::new(p, q);
    for _ in 0..n {
        let pass = d.new_pass(1);
        d.gate.push(pass);
        d.new_free_loop(vec![pass]);
    }
    d
}

/// The standard coil of winding `k != 0`: |k| gate passes and |k| - 1
/// negative self-crossings (the return strand passes under the spiral).
/// Negative `k` is the reversed orientation.
pub fn coil(p: u32, q: i64, k: i64) -> Diagram {
    let mut d = Diagram::new(p, q);
    build_coil_into(&mut d, k);
    d
}

/// `t_k` as a mixed link diagram (alias for the standard coil).
pub fn t_generator(p: u32, q: i64, k: i64) -> Diagram {
    coil(p, q, k)
}

/// Product of coils t_{k_1} ... t_{k_s} placed consecutively along the gate,
/// the first factor innermost.
pub fn product_of_coils(p: u32, q: i64, windings: &[i64]) -> Diagram {
    let mut d = Diagram::new(p, q);
    for &k in windings {
        build_coil_into(&mut d, k);
    }
    d
}

/// Append one coil of winding k to the outside of the current gate.
pub(crate) fn build_coil_into(d: &mut Diagram, k: i64) {
    assert!(k != 0, "a coil must wind");
    let m = k.unsigned_abs() as usize;
    if m == 1 {
        let pass = d.new_pass(1);
        d.gate.push(pass);
        let loop_edge = d.new_free_loop(vec![pass]);
        if k < 0 {
            let comp = d.component_of(loop_edge);
            d.reverse_components(&[comp]);
        }
        return;
    }

    // passes rho_1 (innermost) .. rho_m, appended outside the existing gate
    let passes: Vec<u32> = (0..m).map(|_| d.new_pass(1)).collect();
    for &p in &passes {
        d.gate.push(p);
    }

    // crossings c_1 .. c_{m-1}: the return strand (under, ports 0 -> 2)
    // crosses the arc between pass j+1 and pass j (over, ports 1 -> 3)
    let cs: Vec<u32> = (0..m - 1).map(|_| d.new_crossing(1)).collect();

    // edge X_m: from (c_{m-1}, under-out) through the closure point and
    // pass rho_m into (c_{m-1}, over-in)
    let x_m = d.new_edge();
    {
        let e = d.edges.get_mut(&x_m).unwrap();
        e.passes = vec![passes[m - 1]];
    }
    d.set_edge_from(x_m, End::new(cs[m - 2], 2));
    d.set_edge_to(x_m, End::new(cs[m - 2], 1));

    // arcs X_j: from (c_j, over-out) to (c_{j-1}, over-in), pass rho_j
    for j in (2..m).rev() {
        let x = d.new_edge();
        d.edges.get_mut(&x).unwrap().passes = vec![passes[j - 1]];
        d.set_edge_from(x, End::new(cs[j - 1], 3));
        d.set_edge_to(x, End::new(cs[j - 2], 1));
    }

    // X_1: from (c_1, over-out) around the bottom into (c_1, under-in), pass rho_1
    let x_1 = d.new_edge();
    d.edges.get_mut(&x_1).unwrap().passes = vec![passes[0]];
    d.set_edge_from(x_1, End::new(cs[0], 3));
    d.set_edge_to(x_1, End::new(cs[0], 0));

    // return segments R_j: from (c_j, under-out) to (c_{j+1}, under-in)
    for j in 1..m - 1 {
        let r = d.new_edge();
        d.set_edge_from(r, End::new(cs[j - 1], 2));
        d.set_edge_to(r, End::new(cs[j], 0));
    }

    if k < 0 {
        let comp = d.component_of(x_1);
        d.reverse_components(&[comp]);
    }
}

/// The affine right-handed trefoil: closure of the 2-braid with three
/// positive crossings, away from the gate.
pub fn trefoil_affine(p: u32, q: i64) -> Diagram {
    let mut d = Diagram::new(p, q);
    let cs: Vec<u32> = (0..3).map(|_| d.new_crossing(3)).collect();
    for i in 0..3 {
        let next = (i + 1) % 3;
        // left column: under-out (2) -> over-in (3)
        let e = d.new_edge();
        d.set_edge_from(e, End::new(cs[i], 2));
        d.set_edge_to(e, End::new(cs[next], 3));
        // right column: over-out (1) -> under-in (0)
        let e2 = d.new_edge();
        d.set_edge_from(e2, End::new(cs[i], 1));
        d.set_edge_to(e2, End::new(cs[next], 0));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_unknot_valid() {
        let d = affine_unknot(5, 1);
        assert_eq!(d.validate(), Vec::<String>::new());
        assert_eq!(d.linking_with_fixed().unwrap(), 0);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn x_generator_windings() {
        let d = x_generator(5, 1, 3);
        assert!(d.validate().is_empty());
        assert_eq!(d.linking_with_fixed().unwrap(), 3);
        assert_eq!(d.components().len(), 3);
        assert_eq!(d.crossing_count(), 0);
    }

    #[test]
    fn coil_structure() {
        for k in [1i64, 2, 3, -2, 5, -4] {
            let d = coil(7, 1, k);
            assert!(d.validate().is_empty(), "coil {k}: {:?}", d.validate());
            assert_eq!(d.components().len(), 1, "coil {k}");
            assert_eq!(d.linking_with_fixed().unwrap(), k, "coil {k}");
            assert_eq!(d.crossing_count(), (k.unsigned_abs() as usize).saturating_sub(1));
            // the standard coil carries negative self-crossings
            if k.abs() > 1 {
                assert_eq!(d.writhe(), -(k.abs() - 1), "coil {k}");
            }
        }
    }

    #[test]
    fn t2_standard_diagram() {
        // one crossing, two same-sign gate passes
        let d = t_generator(5, 1, 2);
        assert!(d.validate().is_empty());
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.gate().len(), 2);
        let comp = &d.components()[0];
        assert_eq!(d.component_winding(comp), 2);
        assert_eq!(d.writhe().abs(), 1);
    }

    #[test]
    fn product_gate_order() {
        let d = product_of_coils(5, 1, &[-2, -2, 3]);
        assert!(d.validate().is_empty());
        assert_eq!(d.components().len(), 3);
        let windings: Vec<i64> = d.components().iter().map(|c| d.component_winding(c)).collect();
        let mut sorted = windings.clone();
        sorted.sort();
        assert_eq!(sorted, vec![-2, -2, 3]);
    }

    #[test]
    fn trefoil_valid() {
        let d = trefoil_affine(2, 1);
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.crossing_count(), 3);
    }

    #[test]
    fn mirror_and_reverse() {
        let d = coil(5, 1, 3);
        let m = d.mirror();
        assert!(m.validate().is_empty());
        assert_eq!(m.writhe(), -d.writhe());
        assert_eq!(m.mirror(), d);

        let all: Vec<u32> = d.components().iter().map(|c| c.id()).collect();
        let r = d.reverse_orientation(&all).unwrap();
        assert!(r.validate().is_empty());
        assert_eq!(r.linking_with_fixed().unwrap(), -3);
        let rr = r.reverse_orientation(&all).unwrap();
        assert_eq!(rr, d);
    }

    #[test]
    fn flip_involution() {
        for d in [coil(5, 1, 3), x_generator(4, 1, 2), trefoil_affine(3, 1)] {
            let f = d.flip();
            assert!(f.validate().is_empty(), "{:?}", f.validate());
            assert_eq!(f.flip(), d);
            assert_eq!(f.linking_with_fixed().unwrap(), d.linking_with_fixed().unwrap());
        }
    }
}
