//! Verification suites over the shipped fixtures and exhaustive small cases.
//!
//! Every check is deterministic for a given seed; output carries no timings.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{characters, int, rat, sign_samples, AlgElement, AlgebraHom, FinCommAlgebra};
use crate::aqft::{build_p, check_triples_vs_generic, covering_holds};
use crate::bohrify::{check_componentwise_cstar, full_context_poset, set_partitions};
use crate::bundle::{
    apply_fibre_map, check_colimit, check_frame, check_internal_frame, check_opfibration_specialization,
    check_point_conditions, check_pullback, external_opens, external_points, internal_frame, sier_points, ContextDiagram,
    DEFAULT_MAX_OPENS,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lattice::{build_la, check_la_axioms, induced_hom, normalize, DLattice, LatElem, LatExpr, Presentation};
use crate::oracle;
use crate::poset::{bits, FinPoset};
use crate::spectrum::{
    check_ridl_is_opens, gelfand_check, is_normal, push_well_inside, regular_ideals, regular_prime_filters,
    regular_rounded_bijection, rounded_ideals, shrink_witness, WellInsideRel,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lattice,
    Spectrum,
    Bundle,
    Aqft,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(Suite::Lattice),
            "spectrum" => Ok(Suite::Spectrum),
            "bundle" => Ok(Suite::Bundle),
            "aqft" => Ok(Suite::Aqft),
            "all" => Ok(Suite::All),
            other => Err(Error::Schema { path: "suite".into(), message: format!("unknown suite `{other}`") }),
        }
    }
}

/// One named check and its result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Run `body`; an error counts as a failure with the error as detail.
fn check(name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { name: name.to_string(), passed, detail }
}

fn qi(k: usize) -> Arc<FinCommAlgebra> {
    Arc::new(FinCommAlgebra::standard(k).expect("k >= 1"))
}

/// Axioms (1a)-(1e) on every sign sample of `ℚ[i]ᵏ`, `k ≤ 3`.
pub fn axiom_audit() -> Check {
    check("axiom audit", || {
        let mut instances = 0;
        let mut violations = Vec::new();
        for k in 1..=3 {
            let a = qi(k);
            let samples = sign_samples(&a);
            instances += 1 + samples.len() * (2 + 2 * samples.len());
            violations.extend(check_la_axioms(&build_la(a)?, &samples)?);
        }
        let first = violations.first().map(|v| format!("; first {v}")).unwrap_or_default();
        Ok((violations.is_empty(), format!("{instances} instances, {} violations{first}", violations.len())))
    })
}

/// `L_{ℚ[i]ᵏ}` has `2ᵏ` elements, is Boolean, and `≪ = ≤`, for `k ≤ 4`.
pub fn boolean_identification() -> Check {
    check("boolean identification", || {
        let mut sizes = Vec::new();
        let mut ok = true;
        for k in 1..=4 {
            let la = build_la(qi(k))?;
            let l = la.lattice();
            let rel = WellInsideRel::new(l.clone());
            let onto: std::collections::BTreeSet<LatElem> =
                sign_samples(la.algebra()).iter().map(|a| la.d(a)).collect::<Result<_>>()?;
            ok &= l.len() == 1 << k && l.is_boolean() && onto.len() == l.len();
            for &a in l.elements() {
                for &b in l.elements() {
                    ok &= rel.holds(a, b) == l.leq(a, b) && oracle::well_inside(l, a, b) == l.leq(a, b);
                }
            }
            sizes.push(l.len().to_string());
        }
        Ok((ok, format!("sizes {}", sizes.join(","))))
    })
}

/// Regular prime filters of `L_A` against characters, for `1..=5` outcomes.
pub fn gelfand_round_trip() -> Check {
    check("gelfand round-trip", || {
        let mut ok = true;
        let mut counts = Vec::new();
        for k in 1..=5 {
            let la = build_la(qi(k))?;
            let filters = regular_prime_filters(la.lattice());
            let brute = oracle::regular_prime_filters(la.lattice());
            let chars = characters(la.algebra());
            ok &= filters.len() == chars.len() && brute.len() == chars.len();
            ok &= filters.iter().zip(&brute).all(|(f, b)| f.members() == *b);
            ok &= gelfand_check(&la, &sign_samples(la.algebra()))?.is_empty();
            counts.push(format!("{}={}", k, filters.len()));
        }
        Ok((ok, format!("filters per outcome count {}", counts.join(" "))))
    })
}

fn same_sets(a: Vec<Vec<LatElem>>, b: Vec<Vec<LatElem>>) -> bool {
    let mut a = a;
    let mut b = b;
    a.sort();
    b.sort();
    a == b
}

/// Regular/rounded bijection and `RIdl ≅ opens` on down-set lattices of all
/// posets with at most four points, against brute-force enumeration.
pub fn regular_rounded_small_posets() -> Check {
    check("regular-rounded bijection on small posets", || {
        let mut normal = 0;
        let mut total = 0;
        let mut failures = Vec::new();
        for n in 0..=4 {
            for p in oracle::all_posets(n) {
                total += 1;
                let l = Arc::new(DLattice::downsets_of(&p));
                let (fast, brute) = (is_normal(&l), oracle::is_normal(&l));
                if fast != brute {
                    failures.push(format!("normality differs on {p:?}"));
                }
                if !fast {
                    continue;
                }
                normal += 1;
                let bij = regular_rounded_bijection(&l)?;
                let ridl = check_ridl_is_opens(&l)?;
                let filters: Vec<Vec<LatElem>> = regular_prime_filters(&l).iter().map(|f| f.members()).collect();
                let rounded: Vec<Vec<LatElem>> = rounded_ideals(&l).iter().map(|r| r.members()).collect();
                let regular: Vec<Vec<LatElem>> = regular_ideals(&l).into_iter().map(|g| l.down(g)).collect();
                if !bij.ok()
                    || !ridl.ok()
                    || !same_sets(filters, oracle::regular_prime_filters(&l))
                    || !same_sets(rounded, oracle::rounded_ideals(&l))
                    || !same_sets(regular, oracle::regular_ideals(&l))
                {
                    failures.push(format!("mismatch on a {n}-point poset"));
                }
            }
        }
        let chain = Arc::new(DLattice::chain(3));
        let ridl = check_ridl_is_opens(&chain)?;
        let chain_ok = ridl.points.len() == 1 && ridl.opens.len() == 2;
        Ok((
            failures.is_empty() && chain_ok,
            format!(
                "{total} posets, {normal} normal, {} failures; 3-chain {} point, {} opens",
                failures.len(),
                ridl.points.len(),
                ridl.opens.len()
            ),
        ))
    })
}

/// `≪` laws on every down-set lattice of a poset with at most four points.
pub fn well_inside_laws() -> Check {
    check("well-inside laws", || {
        let mut lattices = 0;
        let mut failures = 0;
        for n in 0..=4 {
            for p in oracle::all_posets(n) {
                let l = Arc::new(DLattice::downsets_of(&p));
                let rel = WellInsideRel::new(l.clone());
                lattices += 1;
                let els = l.elements();
                let mut ok = rel.is_transitive() && (!is_normal(&l) || rel.is_interpolative());
                for &(ap, a) in &rel.pairs() {
                    ok &= l.leq(ap, a);
                    for &b in els {
                        for &bp in els {
                            if l.leq(bp, ap) && l.leq(a, b) {
                                ok &= rel.holds(bp, b);
                            }
                        }
                        if rel.holds(b, a) {
                            ok &= rel.holds(l.join(ap, b), a);
                        }
                    }
                }
                if l.is_boolean() {
                    ok &= els.iter().all(|&a| els.iter().all(|&b| rel.holds(a, b) == l.leq(a, b)));
                }
                failures += usize::from(!ok);
            }
        }
        Ok((failures == 0, format!("{lattices} lattices, {failures} failures")))
    })
}

fn random_rational(rng: &mut ChaCha8Rng) -> crate::algebra::Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=4))
}

fn random_expr(rng: &mut ChaCha8Rng, gens: &[String], depth: usize) -> LatExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => LatExpr::Top,
            1 => LatExpr::Bottom,
            _ => LatExpr::gen(gens.choose(rng).expect("nonempty").clone()),
        };
    }
    let (a, b) = (random_expr(rng, gens, depth - 1), random_expr(rng, gens, depth - 1));
    if rng.gen_bool(0.5) {
        a.meet(b)
    } else {
        a.join(b)
    }
}

/// Membership of one outcome in `φ(D(aᵢ − r))`, evaluated as a formula.
fn holds_at(phi: &LatExpr, args: &[(String, AlgElement)], o: usize, r: &crate::algebra::Rational) -> bool {
    phi.holds(&|g: &str| {
        let (_, a) = args.iter().find(|(n, _)| n == g).expect("argument");
        Ok(a.values()[o].re() - r > int(0))
    })
    .expect("known generators")
}

/// `shrink_witness` and `push_well_inside` on seeded random instances.
pub fn shrink_lemmas(seed: u64, count: usize) -> Check {
    check("shrink lemmas", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shrink_ok = 0;
        for _ in 0..count {
            let k = rng.gen_range(1..=4);
            let la = build_la(qi(k))?;
            let n = rng.gen_range(1..=3);
            let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
            let args: Vec<(String, AlgElement)> = names
                .iter()
                .map(|nm| {
                    let v = (0..k).map(|_| random_rational(&mut rng)).collect();
                    Ok((nm.clone(), AlgElement::from_rationals(la.algebra().clone(), v)?))
                })
                .collect::<Result<_>>()?;
            let phi = random_expr(&mut rng, &names, 2);
            let zero = int(0);
            let target: u64 = (0..k).filter(|&o| holds_at(&phi, &args, o, &zero)).fold(0, |m, o| m | 1 << o);
            let v = LatElem::from_bits(target & rng.gen_range(0..1u64 << k));
            if !oracle::well_inside(la.lattice(), v, LatElem::from_bits(target)) {
                return Ok((false, "generated instance is not well inside".into()));
            }
            let r = shrink_witness(&la, v, &phi, &args)?;
            if r > zero && bits(v.bits()).all(|o| holds_at(&phi, &args, o, &r)) {
                shrink_ok += 1;
            }
        }
        let mut push_ok = 0;
        for _ in 0..count {
            let ks = rng.gen_range(1..=3);
            let kt = rng.gen_range(ks..=4);
            let mut map: Vec<usize> = (0..ks).chain((ks..kt).map(|_| rng.gen_range(0..ks))).collect();
            map.shuffle(&mut rng);
            let h = AlgebraHom::from_indices(qi(ks), qi(kt), map.clone())?;
            let (src, tgt) = (build_la(qi(ks))?, build_la(qi(kt))?);
            let u = rng.gen_range(0..1u64 << ks);
            let lh = |x: u64| (0..kt).filter(|&t| x >> map[t] & 1 == 1).fold(0u64, |m, t| m | 1 << t);
            let v = lh(u) & rng.gen_range(0..1u64 << kt);
            let up = push_well_inside(&h, &src, &tgt, LatElem::from_bits(u), LatElem::from_bits(v))?;
            if oracle::well_inside(src.lattice(), up, LatElem::from_bits(u)) && v & !lh(up.bits()) == 0 {
                push_ok += 1;
            }
        }
        Ok((
            shrink_ok == count && push_ok == count,
            format!("shrink {shrink_ok}/{count}, push {push_ok}/{count} (seed {seed})"),
        ))
    })
}

/// `normalize` is idempotent and turns `∧` into the antichain meet.
pub fn normal_form_laws(seed: u64, count: usize) -> Check {
    check("normal form laws", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let declared = gens.iter().cloned().collect();
        let mut failures = 0;
        for _ in 0..count {
            let (e1, e2) = (random_expr(&mut rng, &gens, 3), random_expr(&mut rng, &gens, 3));
            let (n1, n2) = (normalize(&e1, &declared)?, normalize(&e2, &declared)?);
            let again = normalize(&n1.to_expr(), &declared)?;
            let meet = normalize(&e1.clone().meet(e2.clone()), &declared)?;
            let join = normalize(&e1.join(e2), &declared)?;
            if again != n1 || meet != n1.meet(&n2) || join != n1.join(&n2) {
                failures += 1;
            }
        }
        Ok((failures == 0, format!("{count} pairs, {failures} failures (seed {seed})")))
    })
}

/// Semantic presentation against congruence closure: every single relation
/// over at most two generators, and seeded relation sets.
pub fn presentation_agreement(seed: u64, count: usize) -> Check {
    check("presentation agreement", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cases: Vec<(Vec<String>, Vec<(LatExpr, LatExpr)>)> = Vec::new();
        for n in 0..=2 {
            let gens: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
            let free: Vec<LatExpr> = crate::lattice::free_lattice(&gens).iter().map(|f| f.to_expr()).collect();
            cases.push((gens.clone(), vec![]));
            for a in &free {
                for b in &free {
                    cases.push((gens.clone(), vec![(a.clone(), b.clone())]));
                }
            }
        }
        let gens3: Vec<String> = (1..=3).map(|i| format!("g{i}")).collect();
        for _ in 0..count {
            let rels = (0..rng.gen_range(1..=3))
                .map(|_| (random_expr(&mut rng, &gens3, 2), random_expr(&mut rng, &gens3, 2)))
                .collect();
            cases.push((gens3.clone(), rels));
        }
        let mut failures = 0;
        for (gens, rels) in &cases {
            let p = Presentation::new(gens.clone(), rels.clone())?;
            let sem = p.present()?;
            let syn = p.congruence_closure()?;
            let mut ok = sem.lattice().len() == syn.len();
            for (l, r) in rels {
                ok &= sem.eval(l)? == sem.eval(r)?;
            }
            let free = syn.free_elements();
            let evals: Vec<LatElem> = free.iter().map(|f| sem.eval(&f.to_expr())).collect::<Result<_>>()?;
            for i in 0..free.len() {
                for j in 0..free.len() {
                    ok &= (syn.class_of_index(i) == syn.class_of_index(j)) == (evals[i] == evals[j]);
                }
            }
            failures += usize::from(!ok);
        }
        Ok((failures == 0, format!("{} presentations, {failures} failures", cases.len())))
    })
}

fn random_surjection(rng: &mut ChaCha8Rng, ks: usize, kt: usize) -> Vec<usize> {
    let mut map: Vec<usize> = (0..ks).chain((ks..kt).map(|_| rng.gen_range(0..ks))).collect();
    map.shuffle(rng);
    map
}

/// `L_{h₂∘h₁} = L_{h₂} ∘ L_{h₁}` and `L_id = id` on seeded random inclusions.
pub fn lattice_functoriality(seed: u64, count: usize) -> Check {
    check("lattice functoriality", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0;
        for _ in 0..count {
            let k1 = rng.gen_range(1..=3);
            let k2 = rng.gen_range(k1..=4);
            let k3 = rng.gen_range(k2..=5);
            let (a1, a2, a3) = (qi(k1), qi(k2), qi(k3));
            let h1 = AlgebraHom::from_indices(a1.clone(), a2.clone(), random_surjection(&mut rng, k1, k2))?;
            let h2 = AlgebraHom::from_indices(a2.clone(), a3.clone(), random_surjection(&mut rng, k2, k3))?;
            let (l1, l2, l3) = (build_la(a1.clone())?, build_la(a2)?, build_la(a3)?);
            let composite = induced_hom(&h1.then(&h2)?, &l1, &l3)?;
            let stepwise = induced_hom(&h1, &l1, &l2)?.then(&induced_hom(&h2, &l2, &l3)?)?;
            let id = induced_hom(&AlgebraHom::identity(a1), &l1, &l1)?;
            let mut ok = true;
            for &e in l1.lattice().elements() {
                ok &= composite.apply(e)? == stepwise.apply(e)? && id.apply(e)? == e;
            }
            ok &= composite.check_preserves().is_empty();
            failures += usize::from(!ok);
        }
        Ok((failures == 0, format!("{count} composable pairs, {failures} failures (seed {seed})")))
    })
}

/// Points, opens and `𝕊^Σ` points of every shipped diagram against brute
/// force, plus the frame, internal frame and point-condition checks.
pub fn shipped_diagrams() -> Check {
    check("shipped diagrams", || {
        let mut lines = Vec::new();
        let mut ok = true;
        for (name, d) in fixtures::diagrams()? {
            let pts = external_points(&d)?;
            let opens = external_opens(&d, DEFAULT_MAX_OPENS)?;
            let sier = sier_points(&d)?;
            let matches = pts.len() == oracle::external_points(&d).len()
                && opens.len() == oracle::external_opens(&d).len()
                && sier.len() == oracle::sier_points(&d).len();
            let frame = check_frame(&opens, &pts)?;
            let small = d.len() <= 3 && (0..d.len()).all(|c| d.algebra(c).dim() <= 3);
            let frame_ok = frame.distributive
                && frame.closed
                && frame.evaluation_failures == 0
                && frame.rerounded == 0
                && (!small || frame.unseparated == 0);
            let internal = internal_frame(&d, DEFAULT_MAX_OPENS)?;
            let internal_ok = check_internal_frame(&d, &internal, &opens).is_empty();
            let conditions_ok = pts.iter().map(check_point_conditions).collect::<Result<Vec<_>>>()?.iter().all(Vec::is_empty);
            ok &= matches && frame_ok && internal_ok && conditions_ok;
            lines.push(format!("{name} {}/{}/{}", pts.len(), opens.len(), sier.len()));
        }
        Ok((ok, format!("points/opens/sier {}", lines.join(", "))))
    })
}

/// `fibre_map` is functorial along composable edges of every shipped diagram.
pub fn fibre_map_functoriality() -> Check {
    check("fibre map functoriality", || {
        let mut triples = 0;
        let mut failures = 0;
        for (_, d) in fixtures::diagrams()? {
            let p = d.poset();
            for c in 0..d.len() {
                for &g in d.la(c).lattice().elements() {
                    if apply_fibre_map(&d, c, c, g)? != g && rounded_ideals(d.la(c).lattice()).iter().any(|r| r.generator() == g) {
                        failures += 1;
                    }
                }
                for e in bits(p.up(c)) {
                    for f in bits(p.up(e)) {
                        for r in rounded_ideals(d.la(c).lattice()) {
                            let g = r.generator();
                            triples += 1;
                            let two = apply_fibre_map(&d, e, f, apply_fibre_map(&d, c, e, g)?)?;
                            if two != apply_fibre_map(&d, c, f, g)? {
                                failures += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok((failures == 0, format!("{triples} composable instances, {failures} failures")))
    })
}

/// The two-context diagram, `full_context_poset(2)`.
pub fn two_context_example() -> Check {
    check("two-context example", || {
        let d = full_context_poset(2)?.diagram;
        let pts = external_points(&d)?.len();
        let opens = external_opens(&d, DEFAULT_MAX_OPENS)?;
        let sier = sier_points(&d)?.len();
        let brute = (oracle::external_points(&d).len(), oracle::external_opens(&d).len(), oracle::sier_points(&d).len());
        let frame = internal_frame(&d, DEFAULT_MAX_OPENS)?;
        let (b, t) = (d.poset().bottom().expect("bottom"), d.poset().top().expect("top"));
        let sizes = (frame.values[b].len(), frame.values[t].len());
        // Restriction to the top forgets the bottom component.
        let restriction_ok = (0..frame.values[b].len()).all(|i| {
            frame.restrict(b, t, i).map(|j| frame.values[t][j].clone()) == Some(vec![frame.values[b][i][t]])
        }) && (0..frame.values[t].len()).all(|j| (0..frame.values[b].len()).any(|i| frame.restrict(b, t, i) == Some(j)));
        let ok = (pts, opens.len(), sier) == (3, 5, 6)
            && brute == (3, 5, 6)
            && sizes == (5, 4)
            && restriction_ok
            && check_internal_frame(&d, &frame, &opens).is_empty();
        Ok((
            ok,
            format!(
                "{pts} points, {} opens, {sier} sier points; brute {}/{}/{}; internal frame {}/{}; restriction {}",
                opens.len(),
                brute.0,
                brute.1,
                brute.2,
                sizes.0,
                sizes.1,
                if restriction_ok { "ok" } else { "wrong" }
            ),
        ))
    })
}

/// Bohrification of `ℚ[i]³`.
pub fn bohr_three() -> Check {
    check("bohrification of Q[i]^3", || {
        let d = full_context_poset(3)?.diagram;
        let ideals = d.ideals();
        let pts = external_points(&d)?;
        let colimit = check_colimit(&d)?;
        let per: Vec<usize> = colimit.iter().map(|c| c.direct).collect();
        let ok = d.len() == 5
            && ideals.len() == 5
            && pts.len() == 10
            && per == [1, 2, 2, 2, 3]
            && colimit.iter().all(|c| c.ok())
            && oracle::external_points(&d).len() == 10;
        let per_s: Vec<String> = per.iter().map(usize::to_string).collect();
        Ok((ok, format!("{} contexts, {} ideals, {} points, per ideal ({})", d.len(), ideals.len(), pts.len(), per_s.join(", "))))
    })
}

/// Point counts of the partition posets against the sum of block counts, and
/// context counts against Bell numbers, for `n ≤ 4`.
pub fn bohr_counting_routes() -> Check {
    check("bohrification counting routes", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for n in 1..=4 {
            let b = full_context_poset(n)?;
            let blocks: usize = b.contexts.iter().map(|c| c.partition.len()).sum();
            let pts = external_points(&b.diagram)?.len();
            ok &= b.diagram.len() as u64 == oracle::bell(n) && set_partitions(n).len() as u64 == oracle::bell(n) && pts == blocks;
            for c in 0..b.diagram.len() {
                ok &= regular_prime_filters(b.diagram.la(c).lattice()).len() == b.contexts[c].partition.len();
            }
            parts.push(format!("n={n}: {} contexts, {pts} points", b.diagram.len()));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// Componentwise *-algebra checks on shipped diagrams and a known failure.
pub fn componentwise_cstar() -> Check {
    check("componentwise *-algebra", || {
        let mut ok = true;
        for (_, d) in fixtures::diagrams()? {
            ok &= check_componentwise_cstar(&d.to_spec()).is_empty();
        }
        let mut spec = full_context_poset(2)?.diagram.to_spec();
        spec.algebras.get_mut("1,2").expect("bottom").outcomes.push("extra".into());
        let v = check_componentwise_cstar(&spec);
        ok &= v.len() == 1 && v[0].kind == "NotUnitalInclusion";
        Ok((ok, "shipped diagrams pass, non-surjective map reported".into()))
    })
}

/// Distinct posets of the shipped documents with at most five elements.
fn shipped_posets() -> Result<Vec<FinPoset>> {
    let mut out: Vec<FinPoset> = Vec::new();
    let mut candidates: Vec<FinPoset> = fixtures::diagrams()?.iter().map(|(_, d)| d.poset().clone()).collect();
    candidates.extend(fixtures::nets().iter().map(|(_, n)| n.regions().poset().clone()));
    for p in candidates {
        if p.len() <= 5 && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Pullback along every monotone map between shipped posets.
pub fn geometricity() -> Check {
    check("geometricity", || {
        let posets = shipped_posets()?;
        let diagrams: Vec<Arc<ContextDiagram>> = {
            let mut v: Vec<Arc<ContextDiagram>> = Vec::new();
            for (_, d) in fixtures::diagrams()? {
                if d.len() <= 5 && !v.iter().any(|x| **x == *d) {
                    v.push(d);
                }
            }
            v
        };
        let mut maps = 0;
        let mut failures = 0;
        for d in &diagrams {
            for q in &posets {
                for f in q.monotone_maps_into(d.poset()) {
                    maps += 1;
                    if !check_pullback(d, q, &f, DEFAULT_MAX_OPENS)?.ok() {
                        failures += 1;
                    }
                }
            }
        }
        Ok((failures == 0, format!("{} diagrams, {} source posets, {maps} maps, {failures} failures", diagrams.len(), posets.len())))
    })
}

/// The specialization order of `𝕊^Σ` computed both ways on every shipped diagram.
pub fn opfibration() -> Check {
    check("opfibration", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for (name, d) in fixtures::diagrams()? {
            let r = check_opfibration_specialization(&d)?;
            ok &= r.ok();
            parts.push(format!("{name} {}", r.mismatches.len() + r.fibre_mismatches.len()));
        }
        Ok((ok, format!("mismatches {}", parts.join(", "))))
    })
}

/// Triples against generic points on every shipped net.
pub fn aqft_equivalence() -> Check {
    check("aqft equivalence", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for (name, net) in fixtures::nets() {
            let r = check_triples_vs_generic(&net)?;
            ok &= r.ok();
            parts.push(format!("{name} {}={}", r.triples, r.generic));
        }
        Ok((ok, format!("triples=points {}", parts.join(", "))))
    })
}

/// Covers at `(O, C)` ignore entries of `W` at other pairs.
pub fn covering_is_fibrewise() -> Check {
    check("covering is fibrewise", || {
        let mut instances = 0;
        let mut failures = 0;
        for (_, net) in fixtures::nets() {
            let p = build_p(&net)?;
            for x in 0..p.len() {
                let l = p.la(x).lattice();
                let noise: Vec<(usize, LatElem)> =
                    (0..p.len()).filter(|&y| y != x).map(|y| (y, p.la(y).lattice().top())).collect();
                for &a in l.elements() {
                    for &b in l.elements() {
                        let plain = covering_holds(&p, x, a, &[(x, b)])?;
                        let mut w = noise.clone();
                        w.push((x, b));
                        instances += 1;
                        if plain != covering_holds(&p, x, a, &w)? || plain != l.leq(a, b) {
                            failures += 1;
                        }
                    }
                }
            }
        }
        Ok((failures == 0, format!("{instances} instances, {failures} failures")))
    })
}

/// The checks of one suite, in a fixed order.
pub fn run(suite: Suite, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Lattice | Suite::All) {
        out.push(axiom_audit());
        out.push(boolean_identification());
        out.push(normal_form_laws(seed, 200));
        out.push(presentation_agreement(seed, 50));
        out.push(lattice_functoriality(seed, 50));
    }
    if matches!(suite, Suite::Spectrum | Suite::All) {
        out.push(gelfand_round_trip());
        out.push(regular_rounded_small_posets());
        out.push(well_inside_laws());
        out.push(shrink_lemmas(seed, 100));
    }
    if matches!(suite, Suite::Bundle | Suite::All) {
        out.push(two_context_example());
        out.push(bohr_three());
        out.push(bohr_counting_routes());
        out.push(componentwise_cstar());
        out.push(shipped_diagrams());
        out.push(fibre_map_functoriality());
        out.push(geometricity());
        out.push(opfibration());
    }
    if matches!(suite, Suite::Aqft | Suite::All) {
        out.push(aqft_equivalence());
        out.push(covering_is_fibrewise());
    }
    out
}

/// One line per check followed by a summary line.
pub fn render(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    s
}
