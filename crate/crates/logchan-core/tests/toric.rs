use logchan_core::channel::ChiMatrix;
use logchan_core::numeric::exact::{biguint_to_f64, binomial};
use logchan_core::numeric::linalg::CMat;
use logchan_core::pauli::{Bits, PauliOp};
use logchan_core::toric::*;
use logchan_core::{Error, C64};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

const L3: usize = 3;
const N3: usize = 18;

// --- independent geometry for L = 3 -------------------------------------

fn vert(l: usize, r: isize, c: isize) -> usize {
    let l = l as isize;
    (r.rem_euclid(l) * l + c.rem_euclid(l)) as usize
}

fn ends(l: usize, e: usize) -> [usize; 2] {
    let l2 = l * l;
    let (r, c) = if e < l2 { (e / l, e % l) } else { ((e - l2) / l, (e - l2) % l) };
    let (r, c) = (r as isize, c as isize);
    if e < l2 {
        [vert(l, r, c), vert(l, r, c + 1)]
    } else {
        [vert(l, r, c), vert(l, r + 1, c)]
    }
}

fn star_mask(l: usize, edges: u64) -> u32 {
    (0..2 * l * l).filter(|&e| edges >> e & 1 == 1).fold(0u32, |m, e| {
        let [a, b] = ends(l, e);
        m ^ (1 << a) ^ (1 << b)
    })
}

/// Class index `2 z1 + z2` read off commutation with the code's X logicals.
fn class_by_commutation(code: &logchan_core::pauli::StabilizerCode, edges: &[usize]) -> usize {
    let p = PauliOp::z_string(code.n(), edges.iter().copied());
    let z1 = !p.commutes_with(&code.x_bar()[0]);
    let z2 = !p.commutes_with(&code.x_bar()[1]);
    (z1 as usize) << 1 | z2 as usize
}

fn ones(m: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&e| m >> e & 1 == 1).collect()
}

struct Oracle {
    /// Best `(weight, mask)` per star mask.
    best: Vec<Option<(u32, u64)>>,
    /// Minimal weight per star mask and class.
    by_class: Vec<[u32; 4]>,
}

fn oracle() -> &'static Oracle {
    static O: OnceLock<Oracle> = OnceLock::new();
    O.get_or_init(|| {
        let lat = TorusLattice::new(L3).unwrap();
        let mut best = vec![None; 512];
        let mut by_class = vec![[u32::MAX; 4]; 512];
        for m in 0u64..1 << N3 {
            let s = star_mask(L3, m) as usize;
            let w = m.count_ones();
            let cand = (w, m);
            if best[s].is_none_or(|b| cand < b) {
                best[s] = Some(cand);
            }
            let (z1, z2) = lat.z_class(&ones(m, N3));
            let k = (z1 as usize) << 1 | z2 as usize;
            by_class[s][k] = by_class[s][k].min(w);
        }
        Oracle { best, by_class }
    })
}

// --- lattice and code structure -----------------------------------------

#[test]
fn lattice_geometry_matches_independent_oracle() {
    for l in [3, 5, 7, 9] {
        let lat = TorusLattice::new(l).unwrap();
        assert_eq!(lat.n_qubits(), 2 * l * l);
        for e in 0..lat.n_qubits() {
            let mut a = lat.edge_vertices(e);
            let mut b = ends(l, e);
            a.sort();
            b.sort();
            assert_eq!(a, b, "edge {e} at L = {l}");
        }
        for v in 0..lat.n_vertices() {
            for e in lat.star(v) {
                assert!(lat.edge_vertices(e).contains(&v));
            }
        }
    }
    assert!(TorusLattice::new(2).is_err());
    assert!(TorusLattice::new(4).is_err());
}

#[test]
fn generators_commute_and_logicals_pair_up() {
    for l in [3, 5, 7] {
        let (_, code) = build_code(l).unwrap();
        assert_eq!(code.n(), 2 * l * l);
        assert_eq!(code.k(), 2);
        let g = code.generators();
        assert_eq!(g.len(), 2 * (l * l - 1));
        for a in g {
            for b in g {
                assert!(a.commutes_with(b));
            }
            for lop in code.x_bar().iter().chain(code.z_bar()) {
                assert!(a.commutes_with(lop));
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(code.x_bar()[i].commutes_with(&code.z_bar()[j]), i != j);
            }
        }
    }
}

#[test]
fn z_class_agrees_with_commutation() {
    let (lat, code) = build_code(L3).unwrap();
    for m in (0u64..1 << N3).step_by(97) {
        let e = ones(m, N3);
        let (z1, z2) = lat.z_class(&e);
        assert_eq!((z1 as usize) << 1 | z2 as usize, class_by_commutation(&code, &e));
    }
    assert_eq!(lat.z_class(&lat.z1_support()), (true, false));
    assert_eq!(lat.z_class(&lat.z2_support()), (false, true));
}

// --- decoding -------------------------------------------------------------

#[test]
fn table_entries_are_the_smallest_minimal_weight_masks() {
    let table = standard_error_table(L3).unwrap();
    let o = oracle();
    let mut ambiguous = 0;
    for s in 0u32..512 {
        match (table.entry(s), o.best[s as usize]) {
            (None, None) => assert_eq!(s.count_ones() % 2, 1),
            (Some(e), Some((w, m))) => {
                assert_eq!(e.weight, w, "syndrome {s:#011b}");
                assert_eq!(e.correction as u64, m, "syndrome {s:#011b}");
                let min_classes = o.by_class[s as usize].iter().filter(|&&x| x == w).count();
                assert_eq!(e.ambiguous, min_classes > 1);
                ambiguous += e.ambiguous as usize;
            }
            other => panic!("syndrome {s}: {other:?}"),
        }
    }
    assert_eq!(table.len(), 256);
    assert_eq!(table.ambiguous_count(), ambiguous);
    assert!(standard_error_table(5).is_err());
}

#[test]
fn table_corner_cases() {
    let table = standard_error_table(L3).unwrap();
    let lat = TorusLattice::new(L3).unwrap();
    assert_eq!(table.decode_z(&[]).unwrap(), Vec::<usize>::new());
    for e in 0..N3 {
        let mut d = lat.edge_vertices(e).to_vec();
        d.sort();
        assert_eq!(table.decode_z(&d).unwrap(), vec![e]);
    }
    assert!(matches!(table.decode_z(&[0]), Err(Error::InvalidArgument(_))));
}

#[test]
fn matching_decoder_reaches_minimal_weight() {
    let lat = TorusLattice::new(L3).unwrap();
    let dec = MatchingDecoder::new(lat);
    let o = oracle();
    for s in 0u32..512 {
        let defects: Vec<usize> = (0..9).filter(|&v| s >> v & 1 == 1).collect();
        match o.best[s as usize] {
            None => assert!(dec.decode_z(&defects).is_err()),
            Some((w, _)) => {
                let c = dec.decode_z(&defects).unwrap();
                assert_eq!(c.len() as u32, w);
                assert_eq!(star_mask(L3, c.iter().fold(0, |m, &e| m | 1 << e)), s);
            }
        }
    }
    assert!(matches!(mwpm_decode(&lat, &[0, 1, 2]), Err(Error::InvalidArgument(_))));
}

#[test]
fn x_decoding_is_the_dual_image() {
    let table = standard_error_table(L3).unwrap();
    let lat = TorusLattice::new(L3).unwrap();
    for p in 0u32..512 {
        let plaq: Vec<usize> = (0..9).filter(|&v| p >> v & 1 == 1).collect();
        match table.decode_x(&plaq) {
            Err(_) => assert_eq!(p.count_ones() % 2, 1),
            Ok(x) => {
                assert_eq!(lat.coboundary(&x), plaq);
                let m = mwpm_decode_x(&lat, &plaq).unwrap();
                assert_eq!(m.len(), x.len());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matching_never_beats_the_error_and_clears_the_syndrome(half in 1usize..=3, m in any::<u64>()) {
        let lat = TorusLattice::new(2 * half + 1).unwrap();
        let n = lat.n_qubits();
        // sparse errors keep the defect count within the pairing limit
        let edges: Vec<usize> = (0..n).filter(|&e| m >> (e % 64) & 1 == 1 && (m >> ((e * 7) % 64)) & 1 == 1).take(6).collect();
        let defects = lat.boundary(&edges);
        let c = mwpm_decode(&lat, &defects).unwrap();
        prop_assert_eq!(lat.boundary(&c), defects);
        prop_assert!(c.len() <= edges.len());
    }

    #[test]
    fn decompose_then_recompose_is_identity(x in any::<u64>(), z in any::<u64>(), ph in 0u8..4) {
        let (_, code) = build_code(L3).unwrap();
        let p = PauliOp::from_bits(Bits::from_u64(N3, x & 0x3ffff), Bits::from_u64(N3, z & 0x3ffff), ph).unwrap();
        let d = code.decompose(&p).unwrap();
        prop_assert_eq!(code.recompose(&d).unwrap(), p);
    }

    #[test]
    fn fast_decomposition_matches_generic(x in any::<u64>(), z in any::<u64>()) {
        let (x, z) = (x & 0x3ffff, z & 0x3ffff);
        let (lat, code) = build_code(L3).unwrap();
        let ctx = DecomposeContext::new(lat).unwrap();
        let fast = ctx.decompose(x, z).unwrap();
        let generic = code.decompose(&PauliOp::hermitian(Bits::from_u64(N3, x), Bits::from_u64(N3, z)).unwrap()).unwrap();
        prop_assert_eq!(fast.logical, generic.logical);
        prop_assert_eq!(fast.eta, generic.eta);
        // generic syndrome: 8 plaquettes, then 8 stars
        for i in 0..8 {
            prop_assert_eq!(fast.plaquettes >> i & 1 == 1, generic.syndrome.get(i));
            prop_assert_eq!(fast.stars >> i & 1 == 1, generic.syndrome.get(8 + i));
        }
    }

    #[test]
    fn transposed_strings_are_z2_class(idx in 0usize..36) {
        let lat = TorusLattice::new(L3).unwrap();
        let all = enumerate_logical_strings(&lat, 7).unwrap();
        let s = &all[idx % all.len()];
        prop_assert_eq!(lat.z_class(&s.edges), (true, false));
        prop_assert!(lat.boundary(&s.edges).is_empty());
        let t = s.transpose(&lat);
        prop_assert_eq!(lat.z_class(&t.edges), (false, true));
        prop_assert!(lat.boundary(&t.edges).is_empty());
    }

    #[test]
    fn operator_counts_are_translation_invariant(v in 1usize..9, w in 0usize..7, dr in 0isize..3, dc in 0isize..3) {
        let lat = TorusLattice::new(L3).unwrap();
        let shift = |u: usize| {
            let (r, c) = lat.vertex_coords(u);
            lat.vertex(r as isize + dr, c as isize + dc)
        };
        let mut moved = vec![shift(0), shift(v)];
        moved.sort_unstable();
        let a = count_operators_by_class(&lat, &[0, v], w).unwrap();
        let b = count_operators_by_class(&lat, &moved, w).unwrap();
        // the class of an open string depends on the reference cut, so only
        // the total is invariant
        prop_assert_eq!(a.iter().sum::<u64>(), b.iter().sum::<u64>());
    }
}

// --- exact L = 3 channel ---------------------------------------------------

/// Route all `2^18` Z strings through the generic decomposition and rebuild
/// the logical chi from per-(syndrome, class) amplitude sums.
fn chi_via_generic_decompose(theta: f64) -> ChiMatrix {
    let (_, code) = build_code(L3).unwrap();
    let (s, c) = (theta / 2.0).sin_cos();
    let mut sums: BTreeMap<Bits, [C64; 16]> = BTreeMap::new();
    for m in 0u64..1 << N3 {
        let w = m.count_ones() as i32;
        let psi = C64::new(0.0, -s).powi(w) * c.powi(N3 as i32 - w);
        let p = PauliOp::z_string(N3, ones(m, N3));
        let d = code.decompose(&p).unwrap();
        let phase = C64::new(0.0, 1.0).powu(d.eta as u32);
        sums.entry(d.syndrome).or_insert([C64::new(0.0, 0.0); 16])[d.logical] += psi * phase;
    }
    let mut mat = CMat::zeros(16, 16);
    for a in sums.values() {
        for i in 0..16 {
            for j in 0..16 {
                mat[(i, j)] += a[i] * a[j].conj();
            }
        }
    }
    ChiMatrix::new(2, mat).unwrap()
}

fn max_diff(a: &ChiMatrix, b: &ChiMatrix) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..a.dim2() {
        for j in 0..a.dim2() {
            d = d.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    d
}

#[test]
fn brute_force_matches_generic_decomposition() {
    for theta in [0.1, 0.7] {
        let brute = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
        let generic = chi_via_generic_decompose(theta);
        assert!(max_diff(&brute, &generic) < 1e-12, "theta {theta}");
    }
}

#[test]
fn brute_force_channel_is_cptp_and_trivial_at_zero() {
    for theta in [0.0, 0.05, 0.3, 1.0, 2.5] {
        let chi = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
        assert!(chi.is_cptp(1e-12, 1e-10, 1e-12), "theta {theta}");
    }
    let chi = brute_force_logical_chi(L3, 0.0, Axis::Z).unwrap();
    assert!(max_diff(&chi, &ChiMatrix::identity(2).unwrap()) < 1e-15);
}

#[test]
fn x_noise_is_the_dual_of_z_noise() {
    // the dual of the horizontal Z1 string is the X2 string, so duality
    // swaps the two logical qubits
    let swap = |k: usize| (k & 1) << 1 | k >> 1;
    for theta in [0.1, 0.4] {
        let z = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
        let x = brute_force_logical_chi(L3, theta, Axis::X).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let a = z.get(logical_index(Axis::Z, i), logical_index(Axis::Z, j));
                let b = x.get(logical_index(Axis::X, swap(i)), logical_index(Axis::X, swap(j)));
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn unequal_angles_reduce_to_uniform() {
    let theta = 0.2;
    let uniform = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
    let angles = vec![theta; N3];
    let general = brute_force_logical_chi_angles(&angles, Axis::Z, 2).unwrap();
    assert!(max_diff(&uniform, &general) < 1e-13);
    assert!(brute_force_logical_chi_angles(&angles[..5], Axis::Z, 1).is_err());
}

// --- truncated oracle -------------------------------------------------------

#[test]
fn full_weight_truncation_is_exact() {
    let theta = 0.3;
    let noise = RotationNoise::single_axis(N3, theta, Axis::Z);
    let t = truncated_chi_oracle(L3, &noise, N3, 4).unwrap();
    let brute = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
    assert!(max_diff(&t.chi, &brute) < 1e-12);
    assert_eq!(t.terms, 1 << N3);
    assert!(t.tail_mass.abs() < 1e-300);
}

#[test]
fn truncation_error_stays_within_its_bound() {
    let theta = 0.2;
    let noise = RotationNoise::single_axis(N3, theta, Axis::Z);
    let t = truncated_chi_oracle(L3, &noise, 7, 4).unwrap();
    let brute = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
    let d = max_diff(&t.chi, &brute);
    assert!(d <= t.entry_bound, "{d} > {}", t.entry_bound);
    assert!(t.entry_bound > 0.0);
    // worker count does not change the result
    let t1 = truncated_chi_oracle(L3, &noise, 7, 1).unwrap();
    assert!(max_diff(&t.chi, &t1.chi) < 1e-15);
}

#[test]
fn truncation_budget_is_enforced() {
    let noise = RotationNoise::uniform(50, 0.1, [0.6, 0.0, 0.8]);
    assert!(matches!(truncated_chi_oracle(5, &noise, 10, 1), Err(Error::Budget(_))));
    let short = RotationNoise::uniform(10, 0.1, [0.0, 0.0, 1.0]);
    assert!(truncated_chi_oracle(3, &short, 2, 1).is_err());
}

// --- strings --------------------------------------------------------------

/// Count simple cycles of length `ell` in class `Z1` by scanning edge subsets.
fn subset_string_count(ell: usize) -> u64 {
    let lat = TorusLattice::new(L3).unwrap();
    let mut count = 0;
    for m in 0u64..1 << N3 {
        if m.count_ones() as usize != ell {
            continue;
        }
        let edges = ones(m, N3);
        let mut deg = [0u8; 9];
        for &e in &edges {
            for v in ends(L3, e) {
                deg[v] += 1;
            }
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        // connected: flood fill over the chosen edges
        let mut reach = vec![ends(L3, edges[0])[0]];
        let mut used = vec![false; edges.len()];
        let mut grew = true;
        while grew {
            grew = false;
            for (i, &e) in edges.iter().enumerate() {
                let [a, b] = ends(L3, e);
                if !used[i] && (reach.contains(&a) || reach.contains(&b)) {
                    used[i] = true;
                    reach.push(a);
                    reach.push(b);
                    grew = true;
                }
            }
        }
        if used.iter().all(|&u| u) && lat.z_class(&edges) == (true, false) {
            count += 1;
        }
    }
    count
}

#[test]
fn string_enumeration_matches_subset_scan() {
    let lat = TorusLattice::new(L3).unwrap();
    for ell in [3, 5, 7] {
        let want = subset_string_count(ell);
        assert_eq!(logical_strings_of_length(&lat, ell).unwrap().len() as u64, want, "ell {ell}");
        assert_eq!(count_logical_strings(&lat, ell).unwrap(), want, "ell {ell}");
    }
}

#[test]
fn short_strings_follow_the_step_count() {
    for l in [3usize, 5, 7, 9] {
        let lat = TorusLattice::new(l).unwrap();
        assert_eq!(count_logical_strings(&lat, l).unwrap(), l as u64);
        // one up and one down step at distinct columns, over L base rows
        let want = (l * l * (l - 1)) as u64;
        assert_eq!(count_logical_strings(&lat, l + 2).unwrap(), want);
        assert_eq!(count_logical_strings(&lat, l + 1).unwrap(), 0);
        assert_eq!(count_logical_strings(&lat, l - 1).unwrap(), 0);
    }
    let lat = TorusLattice::new(5).unwrap();
    assert!(matches!(count_logical_strings(&lat, 13), Err(Error::Budget(_))));
}

#[test]
fn counting_and_enumeration_agree() {
    for l in [3usize, 5, 7] {
        let lat = TorusLattice::new(l).unwrap();
        for ell in (l..=l + 4).step_by(2) {
            let strings = logical_strings_of_length(&lat, ell).unwrap();
            assert_eq!(count_logical_strings(&lat, ell).unwrap(), strings.len() as u64);
            for s in &strings {
                assert_eq!(s.len(), ell);
                assert!(lat.boundary(&s.edges).is_empty());
                assert_eq!(lat.z_class(&s.edges), (true, false));
                let mut set = s.edge_set();
                set.dedup();
                assert_eq!(set.len(), ell);
            }
        }
    }
}

#[test]
fn string_from_moves_rejects_bad_walks() {
    use Move::*;
    let lat = TorusLattice::new(5).unwrap();
    assert!(string_from_moves(&lat, 0, &[Right; 5]).is_ok());
    assert!(string_from_moves(&lat, 0, &[Right; 4]).is_err());
    assert!(string_from_moves(&lat, 0, &[Right, Up, Down, Right, Right, Right, Right]).is_err());
    assert!(string_from_moves(&lat, 0, &[Right, Up, Right, Right, Right, Right]).is_err());
}

#[test]
fn shape_census_typical_count_matches_column_pairs() {
    let lat = TorusLattice::new(9).unwrap();
    let gamma = 0.5;
    let sc = shape_census(&lat, 13, gamma).unwrap();
    let min_gap = gamma * 3.0;
    let mut pairs = 0u64;
    for a in 0..9usize {
        for b in 0..9usize {
            let d = a.abs_diff(b).min(9 - a.abs_diff(b));
            if a != b && d as f64 >= min_gap {
                pairs += 1;
            }
        }
    }
    let by = &sc.by_length;
    assert_eq!(by[0].length, 9);
    assert_eq!((by[0].total, by[0].typical, by[0].through_anchor), (9, 9, 1));
    assert_eq!(by[1].typical, 9 * pairs);
    assert_eq!(by[1].through_anchor, 9 * 8);
    for c in by {
        assert_eq!(c.typical + c.backtracking + c.tall_step + c.crowded_steps, c.total);
        // one horizontal edge per column in row-translated copies
        assert_eq!(c.total % 9, 0);
    }
    assert_eq!(sc.zeta, 2);
    assert!(sc.atypical_fraction <= sc.predicted_fraction);
}

#[test]
fn shape_classification_examples() {
    use Move::*;
    let lat = TorusLattice::new(9).unwrap();
    let straight = string_from_moves(&lat, 0, &[Right; 9]).unwrap();
    assert_eq!(classify_string_shape(&straight, 0.5), ShapeClass::Typical);
    let tall = string_from_moves(
        &lat,
        0,
        &[Right, Up, Up, Right, Right, Right, Down, Down, Right, Right, Right, Right, Right],
    )
    .unwrap();
    assert_eq!(classify_string_shape(&tall, 0.5), ShapeClass::TallStep);
    let crowded =
        string_from_moves(&lat, 0, &[Right, Up, Right, Down, Right, Right, Right, Right, Right, Right, Right]).unwrap();
    assert_eq!(classify_string_shape(&crowded, 0.5), ShapeClass::CrowdedSteps);
    let back = string_from_moves(
        &lat,
        0,
        &[Right, Up, Right, Right, Up, Left, Up, Right, Right, Down, Down, Down, Right, Right, Right, Right, Right],
    );
    if let Ok(s) = back {
        assert_eq!(classify_string_shape(&s, 0.5), ShapeClass::Backtracking);
    }
    assert_eq!(straight.height_profile(), vec![0; 9]);
    assert!(straight.step_columns().is_empty());
}

// --- partition sums -------------------------------------------------------

/// Partition sum coefficient from the oracle table: for every ordered split
/// `(A, B)` the left side carries `(-i)^{|A|}` and the right side `i^{|B|}`;
/// the pair feeds `chi_{Z1,I}` when `A E_s` is in class `Z1` and `B E_s` is
/// trivial.
fn oracle_partition_coefficient(s: &LogicalString) -> (i64, i64) {
    let lat = TorusLattice::new(L3).unwrap();
    let o = oracle();
    let ell = s.len();
    let mut acc = C64::new(0.0, 0.0);
    for a in 0u32..1 << ell {
        let a_edges: Vec<usize> = (0..ell).filter(|&j| a >> j & 1 == 1).map(|j| s.edges[j]).collect();
        let b_edges: Vec<usize> = (0..ell).filter(|&j| a >> j & 1 == 0).map(|j| s.edges[j]).collect();
        let syn = lat.boundary(&a_edges).iter().fold(0usize, |m, &v| m | 1 << v);
        let e = ones(o.best[syn].unwrap().1, N3);
        let cls = |x: &[usize]| {
            let mut all = x.to_vec();
            all.extend(&e);
            let (z1, z2) = lat.z_class(&all);
            (z1 as usize) << 1 | z2 as usize
        };
        if cls(&a_edges) == 2 && cls(&b_edges) == 0 {
            acc += C64::new(0.0, -1.0).powi(a_edges.len() as i32) * C64::new(0.0, 1.0).powi(b_edges.len() as i32);
        }
    }
    (acc.re.round() as i64, acc.im.round() as i64)
}

#[test]
fn partition_sums_match_the_oracle_at_l3() {
    let lat = TorusLattice::new(L3).unwrap();
    let table = standard_error_table(L3).unwrap();
    for s in enumerate_logical_strings(&lat, 7).unwrap() {
        let r = partition_sum(&s, 0.3, &table).unwrap();
        assert_eq!(r.coefficient, oracle_partition_coefficient(&s), "moves {:?}", s.moves);
        let scale = (0.3f64.sin() / 2.0).powi(s.len() as i32);
        assert!((r.sum - C64::new(r.coefficient.0 as f64, r.coefficient.1 as f64) * scale).norm() < 1e-15);
    }
}

#[test]
fn straight_strings_hit_the_closed_form_exactly() {
    for l in [3usize, 5, 7, 9] {
        let lat = TorusLattice::new(l).unwrap();
        let s = string_from_moves(&lat, 0, &vec![Move::Right; l]).unwrap();
        let r = partition_sum(&s, 0.1, &MatchingDecoder::new(lat)).unwrap();
        let m = (l - 1) / 2;
        let c = biguint_to_f64(&binomial((l - 1) as u64, m as u64)) as i64;
        assert_eq!(r.coefficient, (0, -c), "L = {l}");
        assert_eq!(r.closed_coefficient(), (0, -c));
        assert_eq!(r.exceptional, 0);
        assert_eq!(r.misrouted, 0);
        assert_eq!(r.contributing, 1 << (l - 1));
        assert!((r.sum - r.closed_form).norm() < 1e-15);
        let zero = partition_sum(&s, 0.0, &MatchingDecoder::new(lat)).unwrap();
        assert_eq!(zero.sum, C64::new(0.0, 0.0));
    }
}

#[test]
fn partition_sum_rejects_bad_input() {
    let lat = TorusLattice::new(5).unwrap();
    let dec = MatchingDecoder::new(lat);
    let s = string_from_moves(&lat, 0, &[Move::Right; 5]).unwrap();
    assert!(partition_sum(&s, f64::NAN, &dec).is_err());
    let other = MatchingDecoder::new(TorusLattice::new(3).unwrap());
    assert!(partition_sum(&s, 0.1, &other).is_err());
}

fn bent_string() -> LogicalString {
    use Move::*;
    let lat = TorusLattice::new(9).unwrap();
    string_from_moves(
        &lat,
        0,
        &[Right, Up, Right, Right, Up, Right, Right, Down, Right, Right, Down, Right, Down, Right, Up],
    )
    .unwrap()
}

#[test]
fn bent_string_exceptional_census() {
    let s = bent_string();
    assert_eq!(s.height_profile(), vec![0, 1, 1, 2, 2, 1, 1, 0, -1]);
    let r = partition_sum(&s, 0.1, &MatchingDecoder::new(TorusLattice::new(9).unwrap())).unwrap();
    // regression values for this fixed string
    assert_eq!(r.coefficient, (0, -1440));
    assert_eq!(r.exceptional, 1096);
    assert_eq!(r.middle_exceptional, 1046);
    assert_eq!(r.middle_total, 6435);
    assert_eq!(r.closed_coefficient(), (0, -3432));
    assert_eq!(r.exceptional_by_weight.iter().sum::<u64>(), r.exceptional);
    let bound = exceptional_fraction_bound(9, 3, 1.0 / 3.0);
    assert!(r.exceptional_fraction() <= bound);
    assert!(r.exceptional_fraction() > 0.0);
}

// --- operator counts --------------------------------------------------------

#[test]
fn operator_counts_match_the_exhaustive_census() {
    let lat = TorusLattice::new(L3).unwrap();
    let census = StringCensus::build(Axis::Z).unwrap();
    for s in 0u32..512 {
        if s.count_ones() % 2 == 1 {
            continue;
        }
        let defects: Vec<usize> = (0..9).filter(|&v| s >> v & 1 == 1).collect();
        for w in 0..=8 {
            let got = count_operators_by_class(&lat, &defects, w).unwrap();
            for (k, &g) in got.iter().enumerate() {
                assert_eq!(g, census.count(s, k, w) as u64, "s {s} w {w} k {k}");
            }
        }
    }
    assert!(count_operators_by_class(&lat, &[0], 3).is_err());
    assert!(count_operators(&lat, &[], 0, 4).is_err());
    assert_eq!(count_operators(&lat, &[], 0, 0).unwrap(), 1);
}

// --- estimators and bounds --------------------------------------------------

#[test]
fn estimator_tracks_the_exact_channel() {
    for theta in [0.01, 0.05, 0.1, 0.2] {
        let chi = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
        let est = logical_chi_estimate(L3, theta, DEFAULT_ZETA, DEFAULT_GAMMA).unwrap();
        let coh = est.chi_z1i.im / chi.get(12, 0).im;
        let inc = est.chi_z1z1 / chi.get(12, 12).re;
        assert!((0.5..=2.0).contains(&coh), "theta {theta}: coherent ratio {coh}");
        assert!((0.5..=2.0).contains(&inc), "theta {theta}: incoherent ratio {inc}");
        assert!(chi.get(12, 0).re.abs() < 1e-15);
        assert!(est.chi_z1i.re == 0.0);
        if theta == 0.01 {
            assert!((coh - 1.0).abs() < 0.05);
            assert!((inc - 1.0).abs() < 0.05);
            assert!((est.incoherent_leading / chi.get(12, 12).re - 1.0).abs() < 0.05);
        }
        assert!(est.incoherent_leading <= est.chi_z1z1);
    }
}

#[test]
fn estimator_terms_and_regime() {
    let est = coherent_estimator(5, 0.05, 2).unwrap();
    assert_eq!(est.by_length.iter().map(|c| c.strings).collect::<Vec<_>>(), vec![5, 100, 550]);
    let direct: C64 = est.by_length.iter().map(|c| c.coherent).sum();
    assert!((direct - est.chi_z1i).norm() < 1e-30);
    assert_eq!(incoherent_estimator(5, 0.05, 2).unwrap(), est);
    assert!(matches!(logical_chi_estimate(5, 0.3, 2, 0.5), Err(Error::OutOfRange(_))));
    assert!(matches!(logical_chi_estimate(5, 0.05, 4, 0.5), Err(Error::Budget(_))));
    let t = coherent_string_term(5, 0.1);
    assert!((t.im + 6.0 * (0.1f64.sin() / 2.0).powi(5)).abs() < 1e-20);
    assert!((incoherent_string_term(3, 0.1) - 3.0 * (0.1f64.sin() / 2.0).powi(4)).abs() < 1e-20);
}

#[test]
fn coherent_strength_is_bounded_by_incoherent_strength() {
    for theta in [0.01, 0.05, 0.1, 0.2] {
        let chi = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
        let r = theorem5_ratio_check(&chi, L3, theta, DEFAULT_ZETA, DEFAULT_GAMMA).unwrap();
        assert!(r.holds, "theta {theta}: {} vs {}", r.coherent_strength, r.bound);
        assert!(r.holds_with_budget);
        assert!(r.ratio_holds);
        assert!(r.r > 0.0);
    }
    let chi = brute_force_logical_chi(L3, 0.1, Axis::Z).unwrap();
    assert!(theorem5_ratio_check(&chi, L3, 0.0, 2, 0.5).is_err());
}

#[test]
fn repeated_channel_growth_stays_below_prediction() {
    let chi = brute_force_logical_chi(L3, 0.1, Axis::Z).unwrap();
    let g = rm_growth_check(&chi, 0.1, 50, 1.0).unwrap();
    assert!(g.holds, "{} > {}", g.ratio, g.bound);
    assert!(g.fit.linear > 0.0);
    assert!(rm_growth_check(&chi, 0.0, 50, 1.0).is_err());
}

// --- censuses and probes ----------------------------------------------------

#[test]
fn z1_component_dominates() {
    for theta in [0.05, 0.1, 0.2] {
        let chi = brute_force_logical_chi(L3, theta, Axis::Z).unwrap();
        let c = logical_component_census(&chi).unwrap();
        assert!(c.dominance_holds, "theta {theta}");
        assert!(c.factorization_holds, "theta {theta}: {}", c.factorization_ratio);
        assert_eq!(c.x_sector_max, 0.0);
        assert!(c.trace_residual < 1e-12);
        assert_eq!(c.ranked.len(), 256);
        assert_eq!((c.ranked[0].row, c.ranked[0].col), (0, 0));
    }
    assert!(logical_component_census(&ChiMatrix::identity(1).unwrap()).is_err());
}

#[test]
fn incoherent_weight_classes_reconstruct_the_entry() {
    let ic = incoherent_census(0.1, 7).unwrap();
    assert!(ic.reconstruction_residual < 1e-15);
    assert!(ic.multiplicity_holds);
    assert!(ic.equal_weight > ic.mismatched.abs());
    let chi = brute_force_logical_chi(L3, 0.1, Axis::Z).unwrap();
    assert!((ic.chi_z1z1 - chi.get(12, 12).re).abs() < 1e-15);
    for row in ic.strings.iter().filter(|r| r.length == 3) {
        assert!(row.all_unit);
    }
}

#[test]
fn partner_pair_multiplicities() {
    let p = multiplicity_partner_pair().unwrap();
    assert_eq!((p.first.n_u, p.first.n_c), (2, 4));
    assert_eq!((p.partner.n_u, p.partner.n_c), (12, 2));
    assert_eq!(p.ratio_sum, 6.5);
    assert!(p.first.ratio() < 1.0);
    assert!(p.ratio_sum >= 2.0);
    assert_eq!(p.first.u_weight + p.partner.u_weight, p.string.len() + 1);
}

#[test]
fn disconnected_factor_tends_to_one() {
    let d = disconnected_factor_probe(0.01, 7).unwrap();
    let last = d.by_cutoff.last().unwrap();
    assert_eq!(last.0, 7);
    assert!((last.2 - 1.0).abs() < 1e-4);
    let chi = brute_force_logical_chi(L3, 0.01, Axis::Z).unwrap();
    assert!((d.brute - chi.get(12, 0)).norm() < 1e-20);
    let z = disconnected_factor_probe(0.0, 7).unwrap();
    assert!(z.by_cutoff.iter().all(|c| c.2 == 1.0));
}

#[test]
fn correlated_probe_reduces_to_the_uncorrelated_channel() {
    let h1 = 0.05;
    let p = correlated_toric_probe(h1, 0.0).unwrap();
    let brute = brute_force_logical_chi(L3, 2.0 * h1, Axis::Z).unwrap();
    assert!(max_diff(&p.chi, &brute) < 1e-12);
    let q = correlated_toric_probe(h1, 5e-4).unwrap();
    assert!(q.holds, "{} > {}", q.ratio, q.ratio_bound);
    assert!(q.structure_holds, "{}", q.structure_ratio);
    assert!(q.enhancement < 1.0 && q.repetition_enhancement < 1.0);
    assert!(q.chi.is_cptp(1e-12, 1e-10, 1e-12));
    assert!(correlated_toric_probe(0.5, 0.0).is_err());
}

#[test]
fn correlated_amplitudes_reduce_to_rotation_amplitudes() {
    let a = correlated_weight_amplitudes(18, 0.07, 0.0);
    let b = rotation_weight_amplitudes(18, 0.14);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() < 1e-15);
    }
}

#[test]
fn perturbed_angles_keep_the_inequality() {
    let g = general_angle_spot_check(0.1, 0.02, 4).unwrap();
    assert!(g.holds);
    assert!(!g.perturbed.is_empty());
    let u = &g.uniform;
    assert!(u.coherent < 2.0 / 0.1f64.sin().powi(2) * u.incoherent.powi(2));
    for c in &g.perturbed {
        assert_eq!(c.angles.len(), N3);
        assert!((c.coherent / u.coherent - 1.0).abs() < 1e-6, "{}", c.label);
    }
}
