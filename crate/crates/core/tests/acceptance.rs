//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported but do not fail the process unless
//! `ACCEPTANCE_STRICT=1` is set, so a full workspace test run still reaches
//! every other target.

use genus_cantor::geometry::Point3;
use genus_cantor::ifs::{build_satellite_ifs, Address, Ifs, SatelliteConfig, Word};
use genus_cantor::ladder::Construction;
use genus_cantor::maps::{
    check_conjugation, check_folding_invariance, degree, degree_table, escape_radius, iota, iota1, iota2, iota3,
    power_radius, sample_pairs, Deformation, Part, SurfacePoint,
};
use genus_cantor::sequences::{folding_sequence, meets_density_bound, FoldingSequence};
use genus_cantor::verify::{
    certify_linking, certify_nesting, certify_sigma_dichotomy, certify_tau_proximity, certify_tau_separation,
    proximity_bound, separation_bound, Certificate, LinkingOptions, NestingOptions, Status,
};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn cert_line(c: &Certificate) -> String {
    let sci = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4e}"));
    let w = c.witness.as_ref();
    format!(
        "{} g={} N={}: {:?}, margin {}, achieved {}, required {}, {} pairs checked",
        c.lemma,
        c.g,
        c.n,
        c.status,
        sci(c.margin),
        sci(w.map(|w| w.achieved)),
        sci(w.map(|w| w.required)),
        c.stats.pairs_checked,
    )
}

fn build(g: usize, n: u64) -> Construction {
    Construction::build(g, n).expect("construction")
}

fn admissible(g: usize) -> Construction {
    build(g, FoldingSequence::new(g).unwrap().n)
}

fn sequences() -> Outcome {
    let mut o = Outcome::new();
    let six = folding_sequence(6).unwrap();
    o.check(six == [1, 2, 1, 1, 2, 1], format!("folding_sequence(6) = {six:?}"));
    let mut palindromes = true;
    let mut doubling = true;
    for n in 1..=64 {
        let a = folding_sequence(n).unwrap();
        palindromes &= a.iter().eq(a.iter().rev());
        if 2 * n <= 128 {
            let b = folding_sequence(2 * n).unwrap();
            doubling &= b[..n] == a[..] && b[n..].iter().eq(a.iter().rev());
        }
    }
    o.check(palindromes, "every a_n with n <= 64 is a palindrome".into());
    o.check(doubling, "a_2n = a_n followed by its reverse for n <= 64".into());
    o
}

fn densities() -> Outcome {
    let mut o = Outcome::new();
    for g in 1..=8 {
        let s = FoldingSequence::new(g).unwrap();
        let root = (s.n as f64).sqrt().round() as u64;
        let square = root * root == s.n && root % 2 == 1;
        let meets = meets_density_bound(s.n, s.width());
        let prev_fails = !meets_density_bound((root - 2) * (root - 2), s.width());
        o.check(
            square && meets && prev_fails,
            format!("g={g}: N = {} = {root}^2, C_g = {}, {}^2 fails", s.n, s.width(), root - 2),
        );
    }
    o
}

fn sigma() -> Outcome {
    let mut o = Outcome::new();
    for g in 1..=3 {
        let c = certify_sigma_dichotomy(&admissible(g));
        let ok = c.status == Status::Pass && c.margin.is_some_and(|m| m >= 0.0);
        o.check(ok, cert_line(&c));
    }
    o
}

fn tau() -> Outcome {
    let mut o = Outcome::new();
    for g in 1..=3 {
        let c = admissible(g);
        let n = c.n();
        let sep = certify_tau_separation(&c);
        let w = sep.witness.as_ref().unwrap();
        let ratio = w.achieved / separation_bound(n);
        o.check(sep.status == Status::Pass, cert_line(&sep));
        o.check((1.0..=2.0).contains(&ratio), format!("  separation witness / bound = {ratio:.4}"));
        let prox = certify_tau_proximity(&c);
        let w = prox.witness.as_ref().unwrap();
        let ratio = w.achieved / proximity_bound(c.ladder.seq.width(), n);
        o.check(prox.status == Status::Pass, cert_line(&prox));
        o.check((1.0..=2.0).contains(&ratio), format!("  proximity witness / bound = {ratio:.4} (window [1, 2])"));
    }
    o
}

fn linking() -> Outcome {
    let mut o = Outcome::new();
    let runs = [(1, 9, LinkingOptions::default()), (2, 9, LinkingOptions::default()), (1, 529, LinkingOptions::sampled(500, 500))];
    for (g, n, opts) in runs {
        let (c, m) = certify_linking(&build(g, n), &opts);
        let detail = c.witness.as_ref().map_or(String::new(), |w| format!(", witness {:?} {:?}: {}", w.first, w.second, w.detail));
        o.check(c.status == Status::Pass, format!("{}, {} pairs computed{detail}", cert_line(&c), m.computed_pairs));
    }
    o
}

fn nesting() -> Outcome {
    let mut o = Outcome::new();
    let c = certify_nesting(&admissible(1), &NestingOptions { h: 1e-4 });
    o.check(c.status == Status::Pass && c.margin.is_some_and(|m| m > 0.0), cert_line(&c));
    o
}

fn shift_conjugacy() -> Outcome {
    let mut o = Outcome::new();
    let ifs = Ifs::from_construction(&build(1, 9));
    let bound = ifs.alpha().powi(6) * ifs.torus_diameter();
    let anchor = Point3::new(0.5, 0.0, 0.0);
    let mut rng = StdRng::seed_from_u64(0xacce);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let w = Word::new((0..6).map(|_| rng.gen_range(1..=ifs.m())).collect(), ifs.m()).unwrap();
        let j = rng.gen_range(1..=ifs.m());
        let jw = Word::new(vec![j], ifs.m()).unwrap().concat(&w);
        let (x_jw, _) = ifs.point_from_address(&jw, anchor).unwrap();
        let (x_w, _) = ifs.point_from_address(&w, anchor).unwrap();
        worst = worst.max(ifs.expand(j, x_jw).unwrap().dist(x_w));
    }
    o.check(worst <= bound, format!("g=1 N=9 depth 6, 1000 addresses: max error {worst:.3e}, bound alpha^6 diam = {bound:.3e}"));
    o
}

fn bookkeeping() -> Outcome {
    let mut o = Outcome::new();
    let table = degree_table(6).unwrap();
    for (g, n, d) in &table {
        let expect = BigUint::from(*n) << ((*g as u64).next_power_of_two().trailing_zeros() + 2);
        o.check(*d == expect && *d == degree(*g, *n).unwrap(), format!("degree(g={g}, N={n}) = {d}"));
    }
    let printed: Vec<u64> = [2116u64, 5000, 13456].to_vec();
    let first: Vec<BigUint> = table.iter().take(3).map(|r| r.2.clone()).collect();
    o.check(first == printed.iter().map(|&v| BigUint::from(v)).collect::<Vec<_>>(), "g=1,2,3 give 2116, 5000, 13456".into());
    let p = power_radius(2, 2, 2).unwrap().exact();
    o.check(p == Some(BigUint::from(16u32)), format!("power_radius(2, 2, 2) = {p:?}"));
    let e = escape_radius(1, 529).unwrap();
    o.check(e.exact() == Some(BigUint::from(4u32).pow(46)), format!("escape_radius(1, 529) = {}^({})", e.base, e.exponent));
    o
}

fn symmetries() -> Outcome {
    let mut o = Outcome::new();
    let mut orders = true;
    for k in 1..=6 {
        for m in [iota1(k).unwrap(), iota2(k).unwrap(), iota()] {
            orders &= m.power(2).is_identity() && !m.is_identity();
        }
        let q = iota3(k).unwrap();
        orders &= q.power(4).is_identity() && !q.power(2).is_identity();
    }
    o.check(orders, "iota_1, iota_2, iota are involutions and iota_3 has order 4 for k = 1..6".into());
    for n in [2, 6] {
        let c = admissible(n);
        let (cert, report) = check_folding_invariance(&c).unwrap();
        let matched = report.image.iter().filter(|x| x.is_some()).count();
        o.check(cert.status == Status::Pass, format!("folding invariance n={n} N={}: {matched} copies matched", c.n()));
    }
    let conj = check_conjugation(1000, 0x5eed);
    o.check(conj.status == Status::Pass, "conjugation identities on 1000 rational points".into());
    o
}

fn deformation() -> Outcome {
    let mut o = Outcome::new();
    let d = Deformation::new(1, 625).unwrap();
    let samples = d.samples(32, 8, 0.05);
    let identity = samples.iter().all(|p| d.eval(p, 0.0).unwrap() == d.position(p));
    o.check(identity, format!("H_0 is the identity on {} samples", samples.len()));

    let l = (13.0 * std::f64::consts::SQRT_2 - 10.0) / (20.0 * 625.0);
    let (mut s2, mut s3) = (0.0f64, 0.0f64);
    for p in &samples {
        let shift = d.eval(p, 1.0 / 3.0).unwrap() - d.position(p);
        match p {
            SurfacePoint::SubTorus { part: Part::S2, .. } => s2 = s2.max((shift.norm() - l).abs()),
            SurfacePoint::SubTorus { part: Part::S3, .. } => s3 = s3.max((shift.norm() - 2.0 * l).abs()),
            _ => {}
        }
    }
    o.check(s2 < 1e-15 && s3 < 1e-15, format!("stage shifts l = {l:.6e} and 2l, errors {s2:.1e} and {s3:.1e}"));

    let pairs = sample_pairs(samples.len(), 100_000, 64, 11);
    let t = 0.5;
    let mut gaps = Vec::new();
    let mut dist = Vec::new();
    let mut h = 0.2;
    for _ in 0..8 {
        gaps.push(h);
        dist.push(d.relative_distortion(&samples, &pairs, t + h, t).unwrap());
        h /= 2.0;
    }
    let monotone = dist.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().zip(&dist).map(|(h, x)| format!("{h:.4}:{x:.5}")).collect();
    o.check(monotone && dist[dist.len() - 1] < dist[0], format!("distortion of H_s o H_t^-1 at t = 0.5, |s - t| -> distortion: {}", shown.join(" ")));

    let before: Vec<Point3> = samples.iter().map(|p| d.position(p)).collect();
    let after = d.images(&samples, 1.0).unwrap();
    let b = genus_cantor::maps::estimate_bilipschitz(&before, &after, &pairs);
    o.check(b.lower.is_finite() && b.lower > 0.0 && b.upper.is_finite(), format!("H_1 ratios in [{:.4}, {:.4}] over {} pairs", b.lower, b.upper, b.pairs));
    o
}

fn satellite() -> Outcome {
    let mut o = Outcome::new();
    let c = admissible(1);
    let ifs = Ifs::from_construction(&c);
    let sat = build_satellite_ifs(&ifs, SatelliteConfig::single(&ifs)).unwrap();
    let nest = certify_nesting(&c, &NestingOptions { h: 1e-4 });
    o.check(
        sat.len() == ifs.m() + 1 && sat.min_gap > 0.0 && nest.status == Status::Pass,
        format!("{} level-1 images, satellite gap {:.3e}, torus images disjoint: {:?}", sat.len(), sat.min_gap, nest.status),
    );
    let m = ifs.m();
    let all_sat = Address::new(vec![1, 5], vec![m + 1]).unwrap();
    let torus = Address::new(vec![m + 1], vec![3, 7]).unwrap();
    let mixed = Address::new(vec![], vec![m + 1, 2]).unwrap();
    let labels = (sat.label(&all_sat, 1), sat.label(&torus, 1), sat.label(&mixed, 1));
    o.check(labels == (0, 1, 1), format!("labels: satellite tail {}, torus tail {}, mixed tail {}", labels.0, labels.1, labels.2));
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("sequence fidelity", sequences),
        ("admissible density", densities),
        ("sigma dichotomy", sigma),
        ("tau separation and proximity", tau),
        ("complete linkage", linking),
        ("nesting", nesting),
        ("shift conjugacy", shift_conjugacy),
        ("map bookkeeping", bookkeeping),
        ("symmetries", symmetries),
        ("deformation", deformation),
        ("satellite variant", satellite),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let out = run();
        let secs = started.elapsed().as_secs_f64();
        println!("[{:>2}] {} {name} ({secs:.2} s)", i + 1, if out.pass { "PASS" } else { "FAIL" });
        for l in &out.lines {
            println!("       {l}");
        }
        passed += out.pass as usize;
    }
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed < criteria.len() {
        std::process::exit(1);
    }
}
