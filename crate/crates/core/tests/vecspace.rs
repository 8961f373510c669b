use lsa_core::corpusio::{AgeLevel, Corpus, Manifest, Paragraph, ParagraphId, SourceCategory};
use lsa_core::vecspace::*;
use lsa_oracles::{scaled_term_vectors, Dense, XorShift};
use nalgebra::DMatrix;

fn corpus(docs: &[&str]) -> Corpus {
    Corpus {
        paragraphs: docs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let tokens: Vec<String> = d.split_whitespace().map(String::from).collect();
                Paragraph {
                    id: ParagraphId { source: 0, index: i as u32 },
                    sentence_lengths: vec![tokens.len()],
                    tokens,
                    category: SourceCategory::Stories,
                    level: AgeLevel::new(1).unwrap(),
                    readability: None,
                }
            })
            .collect(),
        manifest: Manifest::default(),
    }
}

fn weighted_from_dense(a: &Dense) -> WeightedMatrix {
    let m = a.len();
    let n = a[0].len();
    WeightedMatrix {
        n_terms: m,
        columns: (0..n)
            .map(|j| (0..m).filter(|&i| a[i][j] != 0.0).map(|i| (i as u32, a[i][j])).collect())
            .collect(),
        stats: (0..m)
            .map(|i| TermStats { term: format!("t{i:03}"), tf_total: 1, df: 1, global_weight: 1.0 })
            .collect(),
    }
}

fn config(k: usize, solver: Solver) -> BuildConfig {
    BuildConfig { k, min_count: 1, seed: 42, solver, ..BuildConfig::default() }
}

fn random_counts(rng: &mut XorShift, m: usize, n: usize) -> Dense {
    (0..m).map(|_| (0..n).map(|_| rng.below(5) as f64).collect()).collect()
}

#[test]
fn full_rank_cosines_match_jacobi_oracle() {
    let mut rng = XorShift::new(1);
    let a = random_counts(&mut rng, 20, 15);
    let oracle = scaled_term_vectors(&a, 15);
    for solver in [Solver::Dense, Solver::DEFAULT_RANDOMIZED] {
        let s = truncated_svd_space(&weighted_from_dense(&a), &config(15, solver)).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let got = s.similarity(&format!("t{i:03}"), &format!("t{j:03}")).unwrap();
                let want = lsa_oracles::cosine(&oracle[i], &oracle[j]);
                assert!((got - want).abs() < 1e-6, "{solver:?} ({i},{j}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn recovered_u_is_orthonormal() {
    let mut rng = XorShift::new(2);
    let a = random_counts(&mut rng, 30, 18);
    let k = 10;
    let s = truncated_svd_space(&weighted_from_dense(&a), &config(k, Solver::Dense)).unwrap();
    let sv = s.singular_values().to_vec();
    let u: Vec<Vec<f64>> = s
        .vocab()
        .iter()
        .map(|t| s.term_vector(t).unwrap().iter().zip(&sv).map(|(x, sv)| x / sv).collect())
        .collect();
    for p in 0..k {
        for q in 0..k {
            let d: f64 = u.iter().map(|r| r[p] * r[q]).sum();
            let want = if p == q { 1.0 } else { 0.0 };
            assert!((d - want).abs() < 1e-6);
        }
    }
    assert!(sv.windows(2).all(|w| w[0] >= w[1] - 1e-12));
}

#[test]
fn captured_energy_is_nondecreasing_in_k() {
    let mut rng = XorShift::new(3);
    let a = random_counts(&mut rng, 25, 20);
    let w = weighted_from_dense(&a);
    let mut last = 0.0;
    for k in 1..=20 {
        let s = truncated_svd_space(&w, &config(k, Solver::Dense)).unwrap();
        let energy: f64 = s.singular_values().iter().map(|x| x * x).sum();
        assert!(energy >= last - 1e-9);
        last = energy;
    }
}

#[test]
fn truncation_is_optimal_among_rank_k_projections() {
    // Eckart–Young: U_k U_kᵀ A beats the projection onto any other k columns basis.
    let mut rng = XorShift::new(4);
    let a = random_counts(&mut rng, 12, 10);
    let w = weighted_from_dense(&a);
    let dense = DMatrix::from_fn(12, 10, |i, j| a[i][j]);
    let k = 3;
    let s = truncated_svd_space(&w, &config(k, Solver::Dense)).unwrap();
    let u = DMatrix::from_fn(12, k, |i, j| s.term_vector(&format!("t{i:03}")).unwrap()[j] / s.singular_values()[j]);
    let best = (&dense - &u * (u.transpose() * &dense)).norm();
    for trial in 0..20 {
        let r = DMatrix::from_fn(12, k, |_, _| rng.unit() - 0.5);
        let q = r.qr().q();
        let err = (&dense - &q * (q.transpose() * &dense)).norm();
        assert!(best <= err + 1e-9, "trial {trial}: {best} > {err}");
    }
}

#[test]
fn cosine_examples_and_errors() {
    assert!((cosine(&[1.0, 2.0], &[1.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(cosine(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0);
    assert!((cosine(&[1.0, 0.0], &[1.0, 1.0]).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]), Err(SpaceError::DegenerateVector));
}

fn toy_space() -> SemanticSpace {
    let docs = [
        "chat chien souris chat",
        "chien os chien jardin",
        "chat souris fromage",
        "jardin fleur rose jardin",
        "rose fleur bouquet",
        "fleur jardin chien",
        "souris fromage trou",
        "bouquet rose fleur rose",
    ];
    build_space(&corpus(&docs), &MatrixOptions::with_min_count(1), &config(5, Solver::Dense)).unwrap()
}

#[test]
fn term_vector_lookup() {
    let s = toy_space();
    assert_eq!(s.term_vector("chat").unwrap().len(), 5);
    assert_eq!(s.term_vector("licorne"), Err(SpaceError::UnknownWord("licorne".into())));
    let c = corpus(&["a a b", "a c"]);
    let s = build_space(&c, &MatrixOptions::with_min_count(2), &config(1, Solver::Dense)).unwrap();
    assert!(s.contains("a"));
    assert!(matches!(s.term_vector("b"), Err(SpaceError::UnknownWord(_))));
}

#[test]
fn neighbors_match_exhaustive_scan() {
    let s = toy_space();
    for probe in s.vocab().to_vec() {
        let pv = s.term_vector(&probe).unwrap().to_vec();
        let mut scan: Vec<(String, f64)> = s
            .vocab()
            .iter()
            .filter(|t| **t != probe)
            .map(|t| (t.clone(), lsa_oracles::cosine(&pv, s.term_vector(t).unwrap())))
            .collect();
        scan.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let got = s.neighbors(Probe::Term(&probe), 4, WeightBand::ALL).unwrap();
        for (g, w) in got.iter().zip(&scan) {
            assert_eq!(g.0, w.0, "probe {probe}");
            assert!((g.1 - w.1).abs() < 1e-12);
        }
        let top1 = s.neighbors(Probe::Term(&probe), 1, WeightBand::ALL).unwrap();
        assert_eq!(top1[0].0, scan[0].0);
        // prefix property
        for n in 1..s.len() {
            let a = s.neighbors(Probe::Term(&probe), n, WeightBand::ALL).unwrap();
            let b = s.neighbors(Probe::Term(&probe), n + 1, WeightBand::ALL).unwrap();
            assert_eq!(a[..], b[..a.len()]);
        }
    }
}

#[test]
fn neighbors_band_filters() {
    let s = toy_space();
    let none = s.neighbors(Probe::Term("chat"), 10, WeightBand { min: 2.0, max: 3.0 }).unwrap();
    assert!(none.is_empty());
    let band = WeightBand { min: 0.5, max: 1.0 };
    for (t, _) in s.neighbors(Probe::Term("chat"), 10, band).unwrap() {
        assert!(band.contains(s.global_weight(&t).unwrap()));
    }
    assert!(s.neighbors(Probe::Term("licorne"), 3, WeightBand::ALL).is_err());
}

#[test]
fn fold_in_matches_explicit_sum() {
    let s = toy_space();
    let single = s.fold_in(&["rose".to_string()]).unwrap();
    let g = s.global_weight("rose").unwrap();
    for (x, v) in single.vector.iter().zip(s.term_vector("rose").unwrap()) {
        assert!((x - v * g).abs() < 1e-12);
    }
    assert_eq!(single.coverage, 1.0);

    let toks: Vec<String> = ["chat", "chat", "os", "licorne"].iter().map(|t| t.to_string()).collect();
    let f = s.fold_in(&toks).unwrap();
    let (ga, gb) = (s.global_weight("chat").unwrap(), s.global_weight("os").unwrap());
    let (va, vb) = (s.term_vector("chat").unwrap(), s.term_vector("os").unwrap());
    for d in 0..5 {
        let want = 3f64.log2() * ga * va[d] + 1.0 * gb * vb[d];
        assert!((f.vector[d] - want).abs() < 1e-12);
    }
    assert_eq!(f.coverage, 0.75);

    let oov: Vec<String> = vec!["licorne".into(), "dragon".into()];
    assert_eq!(s.fold_in(&oov), Err(SpaceError::EmptyProjection));
}

#[test]
fn save_load_round_trip_is_exact() {
    let s = toy_space();
    let bytes = save_space(&s);
    let back = load_space(&bytes).unwrap();
    assert_eq!(back, s);
    for t in s.vocab() {
        let a = s.term_vector(t).unwrap();
        let b = back.term_vector(t).unwrap();
        assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
    assert_eq!(save_space(&back), bytes);
}

#[test]
fn corrupted_and_old_files_are_rejected() {
    let s = toy_space();
    let mut bytes = save_space(&s);
    let good = bytes.clone();
    bytes[0] = b'X';
    assert_eq!(load_space(&bytes), Err(FormatError::BadMagic));

    // crafted fixture from an earlier format revision
    let mut old = Vec::new();
    old.extend_from_slice(MAGIC);
    old.extend_from_slice(&0u32.to_le_bytes());
    old.extend_from_slice(&[0u8; 32]);
    assert_eq!(load_space(&old), Err(FormatError::UnsupportedVersion { found: 0 }));

    assert_eq!(load_space(&good[..good.len() - 3]), Err(FormatError::Truncated));
    assert_eq!(load_space(&good[..20]), Err(FormatError::Truncated));
}

#[test]
fn builds_are_deterministic() {
    let a = save_space(&toy_space());
    let b = save_space(&toy_space());
    assert_eq!(a, b);
}
