use super::linking::{certify_linking, LinkingOptions};
use super::tau::proximity_bound;
use super::{max_by_value, Certificate, Status, Witness};
use crate::geometry::{linking_number_exact, XPoint3};
use crate::ladder::Construction;
use crate::qfield::QSqrt2;
use rayon::prelude::*;
use std::time::Instant;

fn coplanar(v: &[XPoint3]) -> bool {
    let e: Vec<XPoint3> = v[1..].iter().map(|p| p.sub(&v[0])).collect();
    e.windows(2).skip(1).all(|w| {
        let (a, b, c) = (&e[0], &w[0], &w[1]);
        let det: QSqrt2 = &a.x * &(&(&b.y * &c.z) - &(&b.z * &c.y)) - &a.y * &(&(&b.x * &c.z) - &(&b.z * &c.x))
            + &a.z * &(&(&b.x * &c.y) - &(&b.y * &c.x));
        det.is_zero()
    })
}

/// Whether the `true` edges form one cycle through all of `0..len`.
fn single_cycle(len: usize, edges: &[(usize, usize)]) -> bool {
    if len < 3 || edges.len() != len {
        return false;
    }
    let mut adj = vec![Vec::new(); len];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    if adj.iter().any(|v| v.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > len {
            return false;
        }
    }
    steps == len
}

/// The combinatorial structure a genus argument relies on, checked one or two levels deep.
///
/// (a) along each loop the copies form one closed chain, consecutive copies
/// completely linked and all other pairs unlinked; (b) every copy's loops
/// are planar; (c) every vertex of `gamma` lies within the proximity bound of
/// some copy. At depth 2 the chain inside the first copy is recomputed from
/// exactly transported vertices and must reproduce the level-one linking.
pub fn genus_structure_certificate(c: &Construction, depth: usize, link_opts: &LinkingOptions) -> Certificate {
    let started = Instant::now();
    let (g, n) = (c.g(), c.n());
    let mut cert = Certificate::new("genus-structure", g, n, !c.ladder.seq.is_admissible());
    if depth == 0 || depth > 2 {
        cert.notes.push(format!("depth {depth} not supported; use 1 or 2"));
        return cert.finish(started);
    }
    let s = &c.scaffold;
    let (link, matrix) = certify_linking(c, link_opts);
    let mut status = link.status;
    cert.stats = link.stats.clone();
    cert.notes.extend(link.notes.iter().map(|x| format!("linking: {x}")));
    let mut witness = link.witness.clone().filter(|_| !link.status.is_pass());

    // (a) chains per loop from the computed linking.
    let linked = matrix.linked_pairs();
    for (li, l) in s.loops.iter().enumerate() {
        let base = s.flat(li + 1, 1);
        let edges: Vec<(usize, usize)> = linked
            .iter()
            .filter(|&&(a, b)| s.get(a).i == li + 1 && s.get(b).i == li + 1)
            .map(|&(a, b)| (a - base, b - base))
            .collect();
        if link_opts.adjacent.is_none() && !single_cycle(l.len(), &edges) {
            status = Status::Fail;
            cert.notes.push(format!("chain: linked copies on loop {} do not form a single cycle", li + 1));
        }
    }

    // (b) flatness of every copy loop.
    let flat_bad = c
        .copies
        .par_iter()
        .find_first(|t| (1..=g).any(|k| !coplanar(&t.exact_loop(k))))
        .map(|t| (t.i, t.j));
    if let Some(ij) = flat_bad {
        status = Status::Fail;
        cert.notes.push(format!("flatness: copy {ij:?} has a non-planar loop"));
    }

    // (c) every core vertex is near some copy.
    let bound = proximity_bound(c.ladder.seq.width(), n);
    let worst = c
        .ladder
        .union_vertices()
        .into_par_iter()
        .enumerate()
        .map(|(k, v)| {
            let d = c
                .copies
                .iter()
                .flat_map(|t| t.loops().iter())
                .map(|l| l.distance_to_point(v))
                .fold(f64::INFINITY, f64::min);
            Some((d, k))
        })
        .reduce(|| None, max_by_value);
    if let Some((d, _)) = worst {
        cert.notes.push(format!("tracing: farthest core vertex is {d:.6e} from the copies, bound {bound:.6e}"));
        if d > bound {
            status = Status::Fail;
        }
        cert.margin = Some(bound - d);
    }

    // Depth 2: transport the level-one chain into the first copy.
    if depth == 2 {
        let phi = c.copies[0].exact_map();
        let sample: Vec<(usize, usize)> = s.predicate_pairs().into_iter().step_by(7).take(48).collect();
        let bad = sample.par_iter().find_first(|&&(a, b)| {
            (1..=g).any(|k| {
                let la: Vec<XPoint3> = c.copies[a].exact_loop(k).iter().map(|p| phi.apply(p)).collect();
                let lb: Vec<XPoint3> = c.copies[b].exact_loop(k).iter().map(|p| phi.apply(p)).collect();
                let direct = phi.compose(c.copies[a].exact_map());
                let via: Vec<XPoint3> = c.ladder.exact_loops()[k - 1].iter().map(|p| direct.apply(p)).collect();
                via != la || linking_number_exact(&la, &lb).ok() != Some(matrix.get(a, k, b, k))
            })
        });
        cert.notes.push(format!("depth 2: {} transported chain links checked", sample.len()));
        if let Some(&(a, b)) = bad {
            status = Status::Fail;
            cert.notes.push(format!("depth 2: pair {:?}, {:?} changed under transport", s.index_of(a), s.index_of(b)));
        }
    }

    if witness.is_none() && !status.is_pass() {
        if let Some((d, k)) = worst.filter(|w| w.0 > bound) {
            witness = Some(Witness { first: None, second: None, achieved: d, required: bound, detail: format!("core vertex {k}") });
        }
    }
    cert.witness = witness;
    cert.status = status;
    cert.finish(started)
}
