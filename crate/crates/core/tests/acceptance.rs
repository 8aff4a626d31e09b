//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its time budget. Everything is exact arithmetic; random data
//! comes from a fixed-seed generator so reruns are identical.

mod common;

use common::*;
use std::time::{Duration, Instant};
use superline::darboux;
use superline::funcring::{OddContext, Rat as LibRat, SuperConst, SuperFn};
use superline::io;
use superline::kernel::{self, KernelBasis, KernelDim};
use superline::superop::{self, SuperOp};

fn ctx0() -> OddContext {
    OddContext::new(0)
}

fn ctx1() -> OddContext {
    OddContext::new(1)
}

fn op(text: &str, ctx: OddContext) -> SuperOp {
    io::parse_operator(text, ctx).expect("operator parses")
}

fn func(text: &str, ctx: OddContext) -> SuperFn {
    io::parse_function(text, ctx).expect("function parses")
}

fn assert_within(start: Instant, budget: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "{} exceeded its time budget: {:?} > {:?}",
        what,
        elapsed,
        budget
    );
}

/// Builds a certified full-dimension kernel basis of `m` from exponential jet
/// spaces at the given frequencies: parity-split the nullspace vectors, keep
/// the kernel elements, and select a free basis by theta-free-part rank.
fn kernel_from_jets(m: &SuperOp, freqs: &[LibRat], deg: usize) -> KernelBasis {
    let ctx = m.ctx();
    let monos = ctx.all_monomials();
    let mut parts: Vec<SuperFn> = Vec::new();
    let mut seen: Vec<LibRat> = Vec::new();
    for f in freqs {
        if seen.contains(f) {
            continue;
        }
        seen.push(f.clone());
        for v in kernel::solve_kernel_in_jets(m, f, deg, &monos).expect("jet solve") {
            let (even, odd) = v.parity_split();
            for part in [even, odd] {
                if !part.is_zero() && m.apply(&part).expect("ctx").is_zero() {
                    parts.push(part);
                }
            }
        }
    }
    let selected = kernel::select_free_basis(m, &parts);
    let kb = kernel::verify_kernel(m, &selected).expect("kernel certifies");
    let expected = kernel::expected_kernel_dim(m.order().unwrap()).unwrap();
    assert_eq!(kb.dims(), expected, "jet kernel of {} is full", m);
    kb
}

#[test]
fn criterion_1_ring_axioms_and_d_structure() {
    let start = Instant::now();
    let ctx = OddContext::new(2);
    let mut r = rng(0xC1);
    for _ in 0..200 {
        let f = gen_superfn(&mut r, ctx);
        let g = gen_superfn(&mut r, ctx);
        let h = gen_superfn_invertible(&mut r, ctx);

        // D . D = d/dx
        assert_eq!(f.d_super().d_super(), f.d_x());

        // super Leibniz: D(fg) = (Df)g + sigma(f)(Dg)
        let fg = f.checked_mul(&g).unwrap();
        let lhs = fg.d_super();
        let rhs = f
            .d_super()
            .checked_mul(&g)
            .unwrap()
            .checked_add(&f.sigma().checked_mul(&g.d_super()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);

        // sigma: involutive ring map, anti-intertwining with D
        assert_eq!(f.sigma().sigma(), f);
        assert_eq!(fg.sigma(), f.sigma().checked_mul(&g.sigma()).unwrap());
        assert_eq!(f.sigma().d_super(), f.d_super().sigma().neg());

        // invert round trip
        assert!(h.checked_mul(&h.invert().unwrap()).unwrap().is_one());
    }
    assert_within(start, Duration::from_secs(5), "criterion 1");
    println!("acceptance 1 (ring axioms and D-structure, 200 triples): PASS");
}

#[test]
fn criterion_2_division_theorem() {
    let start = Instant::now();
    let ctx = ctx1();
    let mut r = rng(0xC2);
    for _ in 0..200 {
        let ord = rand::Rng::gen_range(&mut r, 0..=3);
        let m = gen_nondegenerate(&mut r, ctx, ord);
        let n = gen_operator(&mut r, ctx, 6);

        let (q, rem) = n.divmod_right(&m).unwrap();
        assert_eq!(
            q.checked_mul(&m).unwrap().checked_add(&rem).unwrap(),
            n,
            "right division reconstructs"
        );
        assert!(rem.deg().is_none_or(|d| d < m.deg().unwrap()));

        let (lq, lrem) = n.divmod_left(&m).unwrap();
        assert_eq!(
            m.checked_mul(&lq).unwrap().checked_add(&lrem).unwrap(),
            n,
            "left division reconstructs"
        );
        assert!(lrem.deg().is_none_or(|d| d < m.deg().unwrap()));

        // re-running is a uniqueness witness
        assert_eq!(n.divmod_right(&m).unwrap(), (q, rem));
        assert_eq!(n.divmod_left(&m).unwrap(), (lq, lrem));
    }
    assert_within(start, Duration::from_secs(30), "criterion 2");
    println!("acceptance 2 (two-sided division with remainder, 200 pairs): PASS");
}

#[test]
fn criterion_3_kernel_dimensions() {
    let start = Instant::now();
    let c = ctx0();
    let cases = [
        ("D", KernelDim::new(1, 0)),
        ("D^2", KernelDim::new(1, 1)),
        ("D^2 - 1", KernelDim::new(1, 1)),
        ("D^3", KernelDim::new(2, 1)),
        ("D^4", KernelDim::new(2, 2)),
        ("D^3 - D", KernelDim::new(2, 1)),
    ];
    for (text, dims) in cases {
        let a = op(text, c);
        let kb = kernel::solve_kernel_constant(&a).unwrap_or_else(|e| {
            panic!("kernel of {} failed: {}", text, e);
        });
        assert_eq!(kb.dims(), dims, "dims of {}", text);
        for e in kb.elems() {
            assert!(a.apply(e).unwrap().is_zero(), "basis of {} verified", text);
        }
    }
    assert_within(start, Duration::from_secs(5), "criterion 3");
    println!("acceptance 3 (kernel dimensions of six operators): PASS");
}

#[test]
fn criterion_4_lemma_worked_examples() {
    let start = Instant::now();
    let c = ctx0();

    let step = darboux::elementary(&op("D^2", c), &func("exp(x)", c)).unwrap();
    assert_eq!(step.m_op(), &op("D - xi", c));
    assert_eq!(step.lambda(), &SuperConst::rat(c, rat(1, 1)));
    assert_eq!(step.target(), &op("D^2", c));

    let l0 = op("D^2 + (xi/x)*D - 1/x", c);
    let step = darboux::elementary(&l0, &func("x", c)).unwrap();
    assert_eq!(step.m_op(), &op("D - xi/x", c));
    assert!(step.lambda().is_zero());
    assert_eq!(step.target(), &op("D^2 - (xi/x)*D", c));

    let c1 = ctx1();
    let step = darboux::elementary(&op("D", c1), &func("1 + xi*theta1", c1)).unwrap();
    assert_eq!(step.m_op(), &op("D - theta1", c1));
    assert_eq!(step.lambda(), &SuperConst::theta(c1, 1).unwrap());
    // the odd eigenvalue anticommutes with the odd operator M_phi, so the
    // unique intertwining target carries the twisted constant
    assert_eq!(step.target(), &op("D - 2*theta1", c1));
    assert_eq!(
        darboux::transform(&op("D", c1), step.m_op()).unwrap(),
        op("D - 2*theta1", c1)
    );

    // intertwining identity by exact operator multiplication, for all three
    for step in [
        darboux::elementary(&op("D^2", c), &func("exp(x)", c)).unwrap(),
        darboux::elementary(&l0, &func("x", c)).unwrap(),
        darboux::elementary(&op("D", c1), &func("1 + xi*theta1", c1)).unwrap(),
    ] {
        assert_eq!(
            step.m_op().checked_mul(step.source()).unwrap(),
            step.target().checked_mul(step.m_op()).unwrap()
        );
    }
    assert_within(start, Duration::from_secs(1), "criterion 4");
    println!("acceptance 4 (elementary transformation worked examples): PASS");
}

fn check_chain_roundtrip(l0: &SuperOp, phis: &[SuperFn], kb_freqs: Option<&[LibRat]>) {
    let chain = darboux::chain_from_eigenfunctions(l0, phis)
        .unwrap_or_else(|e| panic!("chain on {} failed: {}", l0, e));
    let m = chain.composed().clone();
    let r = phis.len();
    assert_eq!(chain.len(), r);
    let kb = kb_freqs.map(|freqs| kernel_from_jets(&m, freqs, r + 2));
    let redone = darboux::factorize_chain(l0, &m, kb)
        .unwrap_or_else(|e| panic!("factorize of {} over {} failed: {}", m, l0, e));
    assert_eq!(redone.len(), r, "exactly r elementary steps");
    assert_eq!(redone.composed(), &m, "composed operator equals M");
    assert_eq!(
        redone.target(),
        &darboux::transform(l0, &m).unwrap(),
        "final operator equals transform(L0, M)"
    );
    for step in redone.steps() {
        assert_eq!(step.m_op().order().unwrap(), 1, "steps are first order");
        assert!(step.source().is_monic() && step.target().is_monic());
        assert_eq!(step.source().deg(), step.target().deg());
    }
}

#[test]
fn criterion_5_theorem_roundtrip() {
    let start = Instant::now();
    let c0 = ctx0();
    let c1 = ctx1();
    let mut chains = 0usize;

    // even seeds with distinct rational exponential eigenfunctions
    let even_seeds = [
        (op("D^2", c0), vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(-1, 1), rat(1, 2), rat(-2, 1)]),
        (op("D^2 - 1", c0), vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(-1, 1)]),
    ];
    for (l0, pool) in &even_seeds {
        for r in 1..=3usize {
            for combo in combinations(pool.len(), r) {
                let freqs: Vec<LibRat> = combo.iter().map(|&i| pool[i].clone()).collect();
                let phis: Vec<SuperFn> = freqs
                    .iter()
                    .map(|a| SuperFn::exp(c0, a.clone()))
                    .collect();
                let kb_freqs = if r == 1 { None } else { Some(&freqs[..]) };
                check_chain_roundtrip(l0, &phis, kb_freqs);
                chains += 1;
            }
        }
    }

    // odd seed D with odd-eigenvalue steps phi = 1 + c*xi*theta1 (N = 1)
    for cs in [&[1i64][..], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]] {
        let phis: Vec<SuperFn> = cs
            .iter()
            .map(|&k| func(&format!("1 + {}*xi*theta1", k), c1))
            .collect();
        let freqs = [rat(0, 1)];
        let kb_freqs = if cs.len() == 1 { None } else { Some(&freqs[..]) };
        check_chain_roundtrip(&op("D", c1), &phis, kb_freqs);
        chains += 1;
    }

    // odd seed D with two independent odd constants (N = 2): the eigenvector
    // search needs theta-degree-2 corrections and mixed odd eigenvalues
    let c2 = OddContext::new(2);
    let n2_chains: Vec<Vec<&str>> = vec![
        vec!["1 + xi*theta1"],
        vec!["1 + xi*theta2"],
        vec!["1 + xi*theta1", "1 + 2*xi*theta2"],
        vec!["1 + 2*xi*theta2", "1 + xi*theta1"],
        vec!["1 + xi*theta1", "1 + 2*xi*theta2", "1 + 3*xi*theta1"],
    ];
    for texts in n2_chains {
        let phis: Vec<SuperFn> = texts.iter().map(|t| func(t, c2)).collect();
        let freqs = [rat(0, 1)];
        let kb_freqs = if texts.len() == 1 { None } else { Some(&freqs[..]) };
        check_chain_roundtrip(&op("D", c2), &phis, kb_freqs);
        chains += 1;
    }

    // odd seeds with constant eigenfunction phi = 1 (composed M = D^r, the
    // automatic constant-coefficient kernel path)
    for l0 in [op("D", c0), op("D^3", c0)] {
        for r in 1..=3usize {
            let phis = vec![SuperFn::one(c0); r];
            check_chain_roundtrip(&l0, &phis, None);
            chains += 1;
        }
    }

    // single步 on D^3 with an x-dependent odd-eigenvalue eigenfunction
    check_chain_roundtrip(&op("D^3", c1), &[func("1 + 2*x*xi*theta1", c1)], None);
    chains += 1;

    assert!(chains >= 50, "generated {} chains", chains);

    // fully worked instance: factorize_chain(D^2, D^2 - 3 xi D - 1)
    let m = op("D^2 - 3*xi*D - 1", c0);
    let kb = kernel_from_jets(&m, &[rat(1, 1), rat(4, 1)], 2);
    let chain = darboux::factorize_chain(&op("D^2", c0), &m, Some(kb)).unwrap();
    assert_eq!(chain.len(), 2);
    assert_eq!(chain.steps()[0].phi(), &func("exp(x)", c0));
    assert_eq!(chain.steps()[0].lambda(), &SuperConst::rat(c0, rat(1, 1)));
    assert_eq!(chain.steps()[0].m_op(), &op("D - xi", c0));
    assert_eq!(chain.steps()[1].m_op(), &op("D - 4*xi", c0));
    assert_eq!(chain.composed(), &m);
    assert_eq!(chain.target(), &op("D^2", c0));

    assert_within(start, Duration::from_secs(60), "criterion 5");
    println!(
        "acceptance 5 (chain factorization round trip, {} chains): PASS",
        chains
    );
}

/// All size-`r` index combinations of `0..n` in lexicographic order.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

#[test]
fn criterion_6_full_factorization() {
    let start = Instant::now();
    let c = ctx0();

    let l = op("D^2 - 1", c);
    let kb = kernel::solve_kernel_constant(&l).unwrap();
    let (a, factors) = superop::factor_first_order(&l, &kb).unwrap();
    assert!(a.is_one());
    assert_eq!(factors, vec![op("D - xi", c), op("D - xi", c)]);

    // reconstruction identity across the kernel corpus
    for text in ["D", "D^2", "D^2 - 1", "D^3", "D^4", "D^3 - D"] {
        let l = op(text, c);
        let kb = kernel::solve_kernel_constant(&l).unwrap();
        let (a, factors) = superop::factor_first_order(&l, &kb).unwrap();
        let mut product = SuperOp::from_fn(a);
        for f in &factors {
            product = product.checked_mul(f).unwrap();
        }
        assert_eq!(product, l, "reconstruction of {}", text);
        assert_eq!(factors.len(), l.order().unwrap());
    }
    assert_within(start, Duration::from_secs(1), "criterion 6");
    println!("acceptance 6 (first-order factorization and reconstruction): PASS");
}

#[test]
fn criterion_7_negative_paths() {
    let start = Instant::now();
    let c = ctx0();

    assert!(matches!(
        darboux::transform(&op("D^2", c), &op("D - x*xi", c)),
        Err(darboux::DarbouxError::NoDarbouxTransform)
    ));

    assert!(matches!(
        darboux::eigencheck(&op("D^2", c), &func("x", c)),
        Err(darboux::DarbouxError::NotEigenfunction)
    ));

    // the odd coordinate derivative D - xi*D^2 is degenerate
    assert!(!op("D - xi*D^2", c).is_nondegenerate().unwrap());

    assert_within(start, Duration::from_secs(1), "criterion 7");
    println!("acceptance 7 (negative paths): PASS");
}

#[test]
fn criterion_8_cli_and_codec() {
    let start = Instant::now();
    let ctx = OddContext::new(2);
    let mut r = rng(0xC8);
    for _ in 0..100 {
        let v = gen_operator(&mut r, ctx, 5);

        let text = v.to_string();
        assert_eq!(text, v.to_string(), "printing is deterministic");
        let reparsed = io::parse_operator(&text, ctx)
            .unwrap_or_else(|e| panic!("reparse of '{}' failed: {}", text, e));
        assert_eq!(reparsed, v, "text round trip of '{}'", text);

        let j = io::op_to_json(&v);
        assert_eq!(io::op_from_json(&j).unwrap(), v, "json round trip");

        let f = gen_superfn(&mut r, ctx);
        let jf = io::fn_to_json(&f);
        assert_eq!(io::fn_from_json(&jf).unwrap(), f);
        let tf = f.to_string();
        if !f.is_zero() {
            assert_eq!(io::parse_function(&tf, ctx).unwrap(), f);
        }
    }

    // CLI determinism: identical argv yields byte-identical output
    let invocations: Vec<Vec<String>> = vec![
        vec!["superline", "elementary", "D^2 + (xi/x)*D - 1/x", "x"],
        vec!["superline", "kernel", "D^3"],
        vec!["superline", "--format", "json", "kernel", "D^3"],
        vec!["superline", "dims", "3"],
        vec!["superline", "--odd-consts", "1", "mphi", "1 + xi*theta1"],
        vec!["superline", "factor-chain", "D^2", "D^2 - 3*xi*D - 1", "--kernel", "exp(x),xi*exp(4*x)"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for argv in invocations {
        let first = io::cli::run_with_input(argv.clone(), None);
        let second = io::cli::run_with_input(argv.clone(), None);
        assert_eq!(first, second, "byte-identical rerun of {:?}", argv);
        assert_eq!(first.0, 0, "exit 0 for {:?}: stderr {}", argv, first.2);
    }

    assert_within(start, Duration::from_secs(5), "criterion 8");
    println!("acceptance 8 (CLI and codec round trips, 100 values): PASS");
}
