//! The invariant suite behind the `selftest` CLI verb.
//!
//! Every check is deterministic for a given seed and reports one pass/fail
//! line. Random elements keep small numerators and denominators so the exact
//! arithmetic stays readable in failure details.

use crate::bruteforce;
use crate::expflow::{evolve, exp, exp_curve, log, right_translation_derivative, PolyCurve};
use crate::group::{GroupElement, LieElement};
use crate::io;
use crate::lie::{bilinear_b, bracket, star};
use crate::poly::Poly;
use crate::rk::RkTableau;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::symplectic::{
    check_symplectic, is_symplectic, is_tangent_symplectic, symplectic_defect,
    tangent_defect, tangent_symplectic_basis,
};
use crate::tree::{enumerate_trees, splittings, Tree};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Ctx {
    rng: ChaCha8Rng,
    order: usize,
    samples: usize,
}

type Check = fn(&mut Ctx) -> Result<String, String>;

/// Runs the full invariant suite at the given truncation order.
///
/// `samples` bounds the number of random elements per property; the result
/// holds one entry per property in a fixed order.
pub fn run(max_order: usize, samples: usize, seed: u64) -> Vec<CheckResult> {
    let checks: &[(&'static str, Check)] = &[
        ("tree census vs counting recurrence", check_census),
        ("canonical form under child shuffles", check_canonical_shuffles),
        ("ordered-subtree multiplicity conservation", check_ost_conservation),
        ("partition multiplicity total 2^(n-1)", check_partition_total),
        ("splitting grading", check_splitting_grading),
        ("group associativity", check_associativity),
        ("group identity laws", check_identity_laws),
        ("group inverse laws", check_inverse_laws),
        ("dilation homomorphism", check_dilation),
        ("truncation consistency", check_truncation),
        ("multiply vs labeled brute force", check_multiply_oracle),
        ("invert vs labeled brute force", check_invert_oracle),
        ("bracket vs labeled brute force", check_bracket_oracle),
        ("inversion growth of a_eps", check_inversion_growth),
        ("bracket bilinearity", check_bilinearity),
        ("bracket antisymmetry and Jacobi", check_jacobi),
        ("bracket grading (finitely supported closure)", check_grading),
        ("star unit laws and commutator", check_star),
        ("exp/log inverse identities", check_exp_log),
        ("exp triangularity", check_triangularity),
        ("evolution vs exp", check_evolve),
        ("BCH identity at order 2", check_bch),
        ("translation derivative, polynomial scalar", check_dtrans_poly),
        ("translation derivative, finite differences", check_dtrans_float),
        ("symplectic closed forms", check_symplectic_closed_forms),
        ("symplectic subgroup closure", check_subgroup_closure),
        ("symplectic exp/log correspondence", check_symplectic_exp_log),
        ("symplectic differential identity", check_differential_identity),
        ("tangent kernel linearity", check_kernel_linearity),
        ("rk composition under halved steps", check_rk_composition),
        ("element and curve file round-trips", check_io_round_trip),
    ];
    checks
        .iter()
        .map(|(name, check)| {
            let mut ctx = Ctx {
                rng: ChaCha8Rng::seed_from_u64(seed ^ hash_name(name)),
                order: max_order,
                samples,
            };
            match check(&mut ctx) {
                Ok(detail) => CheckResult {
                    name,
                    passed: true,
                    detail,
                },
                Err(detail) => CheckResult {
                    name,
                    passed: false,
                    detail,
                },
            }
        })
        .collect()
}

fn hash_name(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

fn rat(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=9);
    Rational::new(num.into(), den.into())
}

fn random_group(rng: &mut ChaCha8Rng, order: usize) -> GroupElement<Rational> {
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    GroupElement::from_fn(order, move |_| rat(&mut rng2))
}

fn random_lie(rng: &mut ChaCha8Rng, order: usize) -> LieElement<Rational> {
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    LieElement::from_fn(order, move |_| rat(&mut rng2))
}

fn random_graded_lie(rng: &mut ChaCha8Rng, order: usize, grade: usize) -> LieElement<Rational> {
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    LieElement::from_fn(order, move |t| {
        if t.order() == grade {
            rat(&mut rng2)
        } else {
            Rational::zero()
        }
    })
}

fn random_kernel(
    rng: &mut ChaCha8Rng,
    basis: &[LieElement<Rational>],
    order: usize,
) -> LieElement<Rational> {
    let mut acc = LieElement::zero_element(order);
    for v in basis {
        acc = &acc + &v.scale(&rat(rng));
    }
    acc
}

fn random_lie_f64(rng: &mut ChaCha8Rng, order: usize) -> LieElement<f64> {
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    LieElement::from_fn(order, move |_| rng2.gen_range(-1.0..1.0))
}

fn random_group_f64(rng: &mut ChaCha8Rng, order: usize) -> GroupElement<f64> {
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    GroupElement::from_fn(order, move |_| rng2.gen_range(-1.0..1.0))
}

fn midpoint_weights(order: usize) -> GroupElement<Rational> {
    GroupElement::from_fn(order, |t| Rational::one().div_nat(1u64 << (t.order() - 1)))
}

fn counting_recurrence(max: usize) -> Vec<u64> {
    let mut a = vec![0u64; max + 1];
    if max >= 1 {
        a[1] = 1;
    }
    for n in 1..max {
        let total: u64 = (1..=n)
            .map(|k| {
                let c: u64 = (1..=k).filter(|d| k % d == 0).map(|d| d as u64 * a[d]).sum();
                c * a[n - k + 1]
            })
            .sum();
        a[n + 1] = total / n as u64;
    }
    a
}

fn check_census(ctx: &mut Ctx) -> Result<String, String> {
    let expected = counting_recurrence(ctx.order);
    let grades = crate::tree::trees_by_order(ctx.order);
    for (i, grade) in grades.iter().enumerate() {
        if grade.len() as u64 != expected[i + 1] {
            return Err(format!(
                "order {} has {} classes, recurrence says {}",
                i + 1,
                grade.len(),
                expected[i + 1]
            ));
        }
    }
    Ok(format!(
        "counts {:?}",
        grades.iter().map(Vec::len).collect::<Vec<_>>()
    ))
}

fn check_canonical_shuffles(ctx: &mut Ctx) -> Result<String, String> {
    let mut checked = 0;
    for tau in enumerate_trees(ctx.order.min(6)) {
        for _ in 0..3 {
            let rebuilt = shuffle_rebuild(&tau, &mut ctx.rng);
            if rebuilt != tau {
                return Err(format!("{} re-canonicalized to {}", tau, rebuilt));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} shuffles stable"))
}

fn shuffle_rebuild(tree: &Tree, rng: &mut ChaCha8Rng) -> Tree {
    let mut children: Vec<Tree> = tree
        .children()
        .iter()
        .map(|c| shuffle_rebuild(c, rng))
        .collect();
    for i in (1..children.len()).rev() {
        let j = rng.gen_range(0..=i);
        children.swap(i, j);
    }
    Tree::with_children(children)
}

fn check_ost_conservation(ctx: &mut Ctx) -> Result<String, String> {
    for tau in enumerate_trees(ctx.order.min(6)) {
        let total: u64 = crate::tree::ordered_subtrees(&tau)
            .iter()
            .map(|t| t.multiplicity)
            .sum();
        let labeled = bruteforce::ordered_subtree_count(&tau);
        if total != labeled {
            return Err(format!("{}: classes total {}, labeled {}", tau, total, labeled));
        }
    }
    Ok(format!("all trees of order <= {}", ctx.order.min(6)))
}

fn check_partition_total(ctx: &mut Ctx) -> Result<String, String> {
    for tau in enumerate_trees(ctx.order.min(6)) {
        let total: u64 = crate::tree::partitions(&tau).iter().map(|t| t.multiplicity).sum();
        if total != 1 << (tau.order() - 1) {
            return Err(format!("{}: total {}", tau, total));
        }
    }
    Ok(format!("all trees of order <= {}", ctx.order.min(6)))
}

fn check_splitting_grading(ctx: &mut Ctx) -> Result<String, String> {
    for tau in enumerate_trees(ctx.order) {
        for sp in splittings(&tau) {
            if sp.kept.order() >= tau.order()
                || sp.removed.order() >= tau.order()
                || sp.kept.order() + sp.removed.order() != tau.order()
            {
                return Err(format!("bad splitting of {}: {:?}", tau, sp));
            }
        }
    }
    Ok(format!("all trees of order <= {}", ctx.order))
}

fn check_associativity(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples {
        let a = random_group(&mut ctx.rng, ctx.order);
        let b = random_group(&mut ctx.rng, ctx.order);
        let c = random_group(&mut ctx.rng, ctx.order);
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        if left != right {
            return Err(format!("sample {i}: (ab)c != a(bc)"));
        }
    }
    Ok(format!("{} random triples", ctx.samples))
}

fn check_identity_laws(ctx: &mut Ctx) -> Result<String, String> {
    let e = GroupElement::identity(ctx.order);
    for i in 0..ctx.samples {
        let a = random_group(&mut ctx.rng, ctx.order);
        if a.multiply(&e).unwrap() != a || e.multiply(&a).unwrap() != a {
            return Err(format!("sample {i}: identity law broken"));
        }
    }
    Ok(format!("{} random elements", ctx.samples))
}

fn check_inverse_laws(ctx: &mut Ctx) -> Result<String, String> {
    let e = GroupElement::identity(ctx.order);
    for i in 0..ctx.samples {
        let a = random_group(&mut ctx.rng, ctx.order);
        let inv = a.invert();
        if a.multiply(&inv).unwrap() != e || inv.multiply(&a).unwrap() != e {
            return Err(format!("sample {i}: inverse law broken"));
        }
    }
    Ok(format!("{} random elements", ctx.samples))
}

fn check_dilation(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples {
        let a = random_group(&mut ctx.rng, ctx.order);
        let b = random_group(&mut ctx.rng, ctx.order);
        let lambda = rat(&mut ctx.rng);
        let left = a.multiply(&b).unwrap().dilate(&lambda);
        let right = a.dilate(&lambda).multiply(&b.dilate(&lambda)).unwrap();
        if left != right {
            return Err(format!("sample {i}: dilation is not a homomorphism"));
        }
    }
    Ok(format!("{} random pairs", ctx.samples))
}

fn check_truncation(ctx: &mut Ctx) -> Result<String, String> {
    let low = (ctx.order / 2).max(1);
    for _ in 0..ctx.samples.min(10) {
        let a = random_group(&mut ctx.rng, ctx.order);
        let b = random_group(&mut ctx.rng, ctx.order);
        let (at, bt) = (a.truncate(low).unwrap(), b.truncate(low).unwrap());
        if a.multiply(&b).unwrap().truncate(low).unwrap() != at.multiply(&bt).unwrap() {
            return Err("multiply does not commute with truncation".into());
        }
        if a.invert().truncate(low).unwrap() != at.invert() {
            return Err("invert does not commute with truncation".into());
        }
        let (la, lb) = (LieElement::from_group(&a), LieElement::from_group(&b));
        let (lat, lbt) = (la.truncate(low).unwrap(), lb.truncate(low).unwrap());
        if bracket(&la, &lb).unwrap().truncate(low).unwrap() != bracket(&lat, &lbt).unwrap() {
            return Err("bracket does not commute with truncation".into());
        }
        if exp(&la).truncate(low).unwrap() != exp(&lat) {
            return Err("exp does not commute with truncation".into());
        }
        if log(&a).truncate(low).unwrap() != log(&at) {
            return Err("log does not commute with truncation".into());
        }
    }
    Ok(format!("order {} restricted to {}", ctx.order, low))
}

fn check_multiply_oracle(ctx: &mut Ctx) -> Result<String, String> {
    let order = ctx.order.min(5);
    for i in 0..ctx.samples.min(10) {
        let a = random_group(&mut ctx.rng, order);
        let b = random_group(&mut ctx.rng, order);
        let ab = a.multiply(&b).unwrap();
        for tau in enumerate_trees(order) {
            if *ab.coeff(&tau).unwrap() != bruteforce::multiply_at(&a, &b, &tau) {
                return Err(format!("sample {i} differs at {}", tau));
            }
        }
    }
    Ok(format!("labeled subsets on all trees of order <= {order}"))
}

fn check_invert_oracle(ctx: &mut Ctx) -> Result<String, String> {
    let order = ctx.order.min(5);
    for i in 0..ctx.samples.min(10) {
        let a = random_group(&mut ctx.rng, order);
        let inv = a.invert();
        for tau in enumerate_trees(order) {
            if *inv.coeff(&tau).unwrap() != bruteforce::invert_at(&a, &tau) {
                return Err(format!("sample {i} differs at {}", tau));
            }
        }
    }
    Ok(format!("labeled edge subsets on all trees of order <= {order}"))
}

fn check_bracket_oracle(ctx: &mut Ctx) -> Result<String, String> {
    let order = ctx.order.min(5);
    for i in 0..ctx.samples.min(10) {
        let a = random_lie(&mut ctx.rng, order);
        let b = random_lie(&mut ctx.rng, order);
        let br = bracket(&a, &b).unwrap();
        for tau in enumerate_trees(order) {
            if *br.coeff(&tau).unwrap() != bruteforce::bracket_at(&a, &b, &tau) {
                return Err(format!("sample {i} differs at {}", tau));
            }
        }
    }
    Ok(format!("labeled splittings on all trees of order <= {order}"))
}

fn check_inversion_growth(ctx: &mut Ctx) -> Result<String, String> {
    let mut a_eps = GroupElement::<Rational>::identity(ctx.order);
    a_eps.set_coeff(&Tree::leaf(), q("1/2")).unwrap();
    let inv = a_eps.invert();
    for tau in enumerate_trees(ctx.order) {
        let magnitude = inv.coeff(&tau).unwrap().abs();
        let expected = Rational::one().div_nat(1u64 << tau.order());
        if magnitude != expected {
            return Err(format!("|a_eps^-1({})| = {}", tau, magnitude));
        }
    }
    Ok(format!("eps = 1/2 at order {}", ctx.order))
}

fn check_bilinearity(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples.min(10) {
        let a = random_lie(&mut ctx.rng, ctx.order);
        let a2 = random_lie(&mut ctx.rng, ctx.order);
        let b = random_lie(&mut ctx.rng, ctx.order);
        let alpha = rat(&mut ctx.rng);
        let left = bilinear_b(&(&a.scale(&alpha) + &a2), &b).unwrap();
        let right = &bilinear_b(&a, &b).unwrap().scale(&alpha) + &bilinear_b(&a2, &b).unwrap();
        if left != right {
            return Err(format!("sample {i}: first slot not linear"));
        }
        let left = bilinear_b(&b, &(&a.scale(&alpha) + &a2)).unwrap();
        let right = &bilinear_b(&b, &a).unwrap().scale(&alpha) + &bilinear_b(&b, &a2).unwrap();
        if left != right {
            return Err(format!("sample {i}: second slot not linear"));
        }
    }
    Ok(format!("{} random triples", ctx.samples.min(10)))
}

fn check_jacobi(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples {
        let a = random_lie(&mut ctx.rng, ctx.order);
        let b = random_lie(&mut ctx.rng, ctx.order);
        let c = random_lie(&mut ctx.rng, ctx.order);
        if bracket(&a, &b).unwrap() != -&bracket(&b, &a).unwrap() {
            return Err(format!("sample {i}: antisymmetry broken"));
        }
        let jacobi = &(&bracket(&a, &bracket(&b, &c).unwrap()).unwrap()
            + &bracket(&b, &bracket(&c, &a).unwrap()).unwrap())
            + &bracket(&c, &bracket(&a, &b).unwrap()).unwrap();
        if !jacobi.is_zero_element() {
            return Err(format!("sample {i}: Jacobi sum nonzero"));
        }
    }
    Ok(format!("{} random triples", ctx.samples))
}

fn check_grading(ctx: &mut Ctx) -> Result<String, String> {
    if ctx.order < 2 {
        return Ok("vacuous below order 2".into());
    }
    for i in 0..ctx.samples.min(10) {
        let p = ctx.rng.gen_range(1..ctx.order);
        let qd = ctx.rng.gen_range(1..=(ctx.order - p));
        let a = random_graded_lie(&mut ctx.rng, ctx.order, p);
        let b = random_graded_lie(&mut ctx.rng, ctx.order, qd);
        let br = bracket(&a, &b).unwrap();
        for tau in enumerate_trees(ctx.order) {
            if tau.order() != p + qd && !br.coeff(&tau).unwrap().is_zero() {
                return Err(format!(
                    "sample {i}: [grade {p}, grade {qd}] leaks to {}",
                    tau
                ));
            }
        }
    }
    Ok("bracket lands in the sum grade; finitely supported elements close".into())
}

fn check_star(ctx: &mut Ctx) -> Result<String, String> {
    let zero = LieElement::zero_element(ctx.order);
    for i in 0..ctx.samples.min(10) {
        let a = random_lie(&mut ctx.rng, ctx.order);
        if star(&a, &zero).unwrap() != a || star(&zero, &a).unwrap() != a {
            return Err(format!("sample {i}: zero is not a star unit"));
        }
        // star is the group product after translating by e
        let b = random_lie(&mut ctx.rng, ctx.order);
        let via_group = LieElement::from_group(
            &GroupElement::from_lie(&a)
                .multiply(&GroupElement::from_lie(&b))
                .unwrap(),
        );
        if star(&a, &b).unwrap() != via_group {
            return Err(format!("sample {i}: star disagrees with multiply"));
        }
    }
    if ctx.order >= 2 {
        for i in 0..ctx.samples.min(10) {
            let p = ctx.rng.gen_range(1..ctx.order);
            let qd = ctx.rng.gen_range(1..=(ctx.order - p));
            let a = random_graded_lie(&mut ctx.rng, ctx.order, p);
            let b = random_graded_lie(&mut ctx.rng, ctx.order, qd);
            let commutator = &star(&a, &b).unwrap() - &star(&b, &a).unwrap();
            let br = bracket(&a, &b).unwrap();
            for tau in enumerate_trees(p + qd) {
                if commutator.coeff(&tau) != br.coeff(&tau) {
                    return Err(format!(
                        "sample {i}: commutator and bracket differ at {}",
                        tau
                    ));
                }
            }
        }
    }
    Ok("unit laws and second-order commutator agree".into())
}

fn check_exp_log(ctx: &mut Ctx) -> Result<String, String> {
    if exp(&LieElement::<Rational>::zero_element(ctx.order)) != GroupElement::identity(ctx.order) {
        return Err("exp(0) != e".into());
    }
    if ctx.order >= 2 {
        let delta = LieElement::<Rational>::delta(ctx.order, &Tree::leaf()).unwrap();
        if exp(&delta).coeff(&"[[]]".parse::<Tree>().unwrap()) != Some(&q("1/2")) {
            return Err("exp(delta)(chain) != 1/2".into());
        }
    }
    for i in 0..ctx.samples {
        let a = random_lie(&mut ctx.rng, ctx.order);
        let b = random_group(&mut ctx.rng, ctx.order);
        let ea = exp(&a);
        if ea.coeff(&Tree::leaf()) != a.coeff(&Tree::leaf()) {
            return Err(format!("sample {i}: exp changes the leaf coefficient"));
        }
        if log(&ea) != a {
            return Err(format!("sample {i}: log(exp(a)) != a"));
        }
        if exp(&log(&b)) != b {
            return Err(format!("sample {i}: exp(log(b)) != b"));
        }
    }
    Ok(format!("{} random elements, both directions", ctx.samples))
}

fn check_triangularity(ctx: &mut Ctx) -> Result<String, String> {
    for _ in 0..ctx.samples.min(10) {
        let a = random_lie(&mut ctx.rng, ctx.order);
        let ea = exp(&a);
        for m in 1..ctx.order {
            let zeroed = LieElement::from_fn(ctx.order, |t| {
                if t.order() <= m {
                    a.coeff(t).unwrap().clone()
                } else {
                    Rational::zero()
                }
            });
            let ez = exp(&zeroed);
            for tau in enumerate_trees(m) {
                if ea.coeff(&tau) != ez.coeff(&tau) {
                    return Err(format!(
                        "zeroing above order {m} changed exp at {}",
                        tau
                    ));
                }
            }
        }
        // stronger form: exp(a)(tau) - a(tau) uses only strictly lower orders
        for tau in enumerate_trees(ctx.order) {
            let below = LieElement::from_fn(ctx.order, |t| {
                if t.order() < tau.order() {
                    a.coeff(t).unwrap().clone()
                } else {
                    Rational::zero()
                }
            });
            let residual = ea.coeff(&tau).unwrap().clone() - a.coeff(&tau).unwrap().clone();
            if residual != *exp(&below).coeff(&tau).unwrap() {
                return Err(format!(
                    "exp(a)({tau}) - a({tau}) depends on coefficients of order >= {}",
                    tau.order()
                ));
            }
        }
    }
    Ok("exp(a)(tau) - a(tau) uses only coefficients of order < |tau|".into())
}

fn check_evolve(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples.min(10) {
        let a = random_lie(&mut ctx.rng, ctx.order);
        if evolve(&PolyCurve::constant(&a)).at_one() != exp(&a) {
            return Err(format!("sample {i}: evolve(const a)(1) != exp(a)"));
        }
    }
    let ramp = PolyCurve::<Rational>::from_fn(ctx.order, |t| {
        if t.order() == 1 {
            Poly::monomial(1, Rational::one())
        } else {
            Poly::zero()
        }
    });
    if evolve(&ramp).at_one().coeff(&Tree::leaf()) != Some(&q("1/2")) {
        return Err("evolve(t * delta)(1) != 1/2 at the leaf".into());
    }
    Ok("constant curves match exp; ramp curve integrates to 1/2".into())
}

fn check_bch(ctx: &mut Ctx) -> Result<String, String> {
    let cutoff = ctx.order.min(2);
    for i in 0..ctx.samples {
        let a = random_lie(&mut ctx.rng, ctx.order);
        let b = random_lie(&mut ctx.rng, ctx.order);
        let lhs = log(&exp(&a).multiply(&exp(&b)).unwrap());
        let rhs = &(&a + &b) + &bracket(&a, &b).unwrap().scale(&q("1/2"));
        for tau in enumerate_trees(cutoff) {
            if lhs.coeff(&tau) != rhs.coeff(&tau) {
                return Err(format!("sample {i}: BCH fails at {}", tau));
            }
        }
    }
    Ok(format!("{} random pairs on trees of order <= {cutoff}", ctx.samples))
}

fn check_dtrans_poly(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples.min(10) {
        let b = random_group(&mut ctx.rng, ctx.order);
        let a = random_lie(&mut ctx.rng, ctx.order);
        let d = right_translation_derivative(&b, &a).unwrap();
        // coefficient of t in (e + t a) · b over the polynomial scalars
        let b_poly = b.map(|c| Poly::constant(c.clone()));
        let line = GroupElement::<Poly<Rational>>::identity(ctx.order)
            .add_scaled(
                &a.map(|c| Poly::constant(c.clone())),
                &Poly::monomial(1, Rational::one()),
            )
            .unwrap();
        let product = line.multiply(&b_poly).unwrap();
        for tau in enumerate_trees(ctx.order) {
            if product.coeff(&tau).unwrap().coeff(1) != *d.coeff(&tau).unwrap() {
                return Err(format!("sample {i}: linear term differs at {}", tau));
            }
            if product.coeff(&tau).unwrap().coeff(0) != *b.coeff(&tau).unwrap() {
                return Err(format!("sample {i}: constant term differs at {}", tau));
            }
        }
    }
    Ok("matches the t-linear term of (e + t a)·b".into())
}

fn check_dtrans_float(ctx: &mut Ctx) -> Result<String, String> {
    let order = ctx.order.min(5);
    let h = 1e-7;
    let tol = 1e-6;
    let mut worst = 0.0f64;
    for i in 0..ctx.samples {
        let b = random_group_f64(&mut ctx.rng, order);
        let a = random_lie_f64(&mut ctx.rng, order);
        let exact = right_translation_derivative(&b, &a).unwrap();
        let e = GroupElement::<f64>::identity(order);
        let shifted = e.add_scaled(&a, &h).unwrap().multiply(&b).unwrap();
        let base = e.multiply(&b).unwrap();
        for tau in enumerate_trees(order) {
            let fd = (shifted.coeff(&tau).unwrap() - base.coeff(&tau).unwrap()) / h;
            let diff = (fd - exact.coeff(&tau).unwrap()).abs();
            worst = worst.max(diff);
            if diff > tol {
                return Err(format!(
                    "sample {i}: finite difference off by {diff:.3e} at {}",
                    tau
                ));
            }
        }
    }
    Ok(format!("worst deviation {worst:.3e} at h = {h:.0e}"))
}

fn check_symplectic_closed_forms(ctx: &mut Ctx) -> Result<String, String> {
    let midpoint = midpoint_weights(ctx.order);
    if !is_symplectic(&midpoint) {
        return Err("midpoint weights fail the symplectic check".into());
    }
    if ctx.order >= 2 {
        let mut euler = GroupElement::<Rational>::identity(ctx.order);
        euler.set_coeff(&Tree::leaf(), Rational::one()).unwrap();
        match check_symplectic(&euler) {
            Err(v) if v.u == Tree::leaf() && v.v == Tree::leaf() && v.defect == q("-1") => {}
            other => return Err(format!("euler witness wrong: {:?}", other)),
        }
    }
    Ok("midpoint passes, euler fails at (•,•) with defect -1".into())
}

fn check_subgroup_closure(ctx: &mut Ctx) -> Result<String, String> {
    let basis = tangent_symplectic_basis::<Rational>(ctx.order);
    for i in 0..ctx.samples.min(10) {
        let a = exp(&random_kernel(&mut ctx.rng, &basis, ctx.order));
        let b = exp(&random_kernel(&mut ctx.rng, &basis, ctx.order));
        if !is_symplectic(&a.multiply(&b).unwrap()) {
            return Err(format!("sample {i}: product leaves the subgroup"));
        }
        if !is_symplectic(&a.invert()) {
            return Err(format!("sample {i}: inverse leaves the subgroup"));
        }
    }
    Ok(format!("{} random products and inverses", ctx.samples.min(10)))
}

fn check_symplectic_exp_log(ctx: &mut Ctx) -> Result<String, String> {
    let basis = tangent_symplectic_basis::<Rational>(ctx.order);
    for i in 0..ctx.samples {
        let x = random_kernel(&mut ctx.rng, &basis, ctx.order);
        if !is_tangent_symplectic(&x) {
            return Err(format!("sample {i}: kernel sample fails Q"));
        }
        let a = exp(&x);
        if !is_symplectic(&a) {
            return Err(format!("sample {i}: exp leaves the subgroup"));
        }
        if log(&a) != x {
            return Err(format!("sample {i}: log does not return the sample"));
        }
    }
    let midpoint = midpoint_weights(ctx.order);
    if !is_tangent_symplectic(&log(&midpoint)) {
        return Err("log of midpoint weights is not tangent-symplectic".into());
    }
    Ok(format!("{} kernel samples plus midpoint", ctx.samples))
}

fn check_differential_identity(ctx: &mut Ctx) -> Result<String, String> {
    let pair_cap = ctx.order.min(5);
    for i in 0..ctx.samples.min(5) {
        let x = random_lie(&mut ctx.rng, ctx.order);
        let gamma = exp_curve(&x).poly_element();
        let trees = enumerate_trees(pair_cap);
        for (ui, u) in trees.iter().enumerate() {
            for v in trees[ui..].iter() {
                if u.order() + v.order() > pair_cap {
                    continue;
                }
                let lhs = symplectic_defect(&gamma, u, v).unwrap().derivative();
                let mut rhs = Poly::constant(tangent_defect(&x, u, v).unwrap());
                for sp in splittings(u) {
                    rhs = rhs
                        + symplectic_defect(&gamma, &sp.kept, v).unwrap()
                            * Poly::constant(
                                Rational::from_count(sp.multiplicity)
                                    * x.coeff(&sp.removed).unwrap().clone(),
                            );
                }
                for sp in splittings(v) {
                    rhs = rhs
                        + symplectic_defect(&gamma, u, &sp.kept).unwrap()
                            * Poly::constant(
                                Rational::from_count(sp.multiplicity)
                                    * x.coeff(&sp.removed).unwrap().clone(),
                            );
                }
                if lhs != rhs {
                    return Err(format!(
                        "sample {i}: d/dt P_{{{u},{v}}} differs from the splitting sum"
                    ));
                }
            }
        }
    }
    Ok(format!("coefficientwise in t for pairs up to order {pair_cap}"))
}

fn check_kernel_linearity(ctx: &mut Ctx) -> Result<String, String> {
    let basis = tangent_symplectic_basis::<Rational>(ctx.order);
    for i in 0..ctx.samples.min(10) {
        let x = random_kernel(&mut ctx.rng, &basis, ctx.order);
        let y = random_kernel(&mut ctx.rng, &basis, ctx.order);
        let alpha = rat(&mut ctx.rng);
        if !is_tangent_symplectic(&(&x + &y)) || !is_tangent_symplectic(&x.scale(&alpha)) {
            return Err(format!("sample {i}: kernel is not a subspace"));
        }
    }
    Ok(format!("{} random combinations", ctx.samples.min(10)))
}

fn check_rk_composition(ctx: &mut Ctx) -> Result<String, String> {
    let order = ctx.order.min(4);
    let methods: Vec<(&str, RkTableau<Rational>)> = vec![
        (
            "implicit midpoint",
            RkTableau::new(vec![vec![q("1/2")]], vec![q("1")], vec![q("1/2")]).unwrap(),
        ),
        (
            "heun",
            RkTableau::new(
                vec![vec![q("0"), q("0")], vec![q("1"), q("0")]],
                vec![q("1/2"), q("1/2")],
                vec![q("0"), q("1")],
            )
            .unwrap(),
        ),
    ];
    for (name, method) in &methods {
        let w = method.elementary_weights(order);
        let half = w.dilate(&q("1/2"));
        let squared = half.multiply(&half).unwrap().dilate(&q("1"));
        let composed = composed_half_steps(method).elementary_weights(order);
        if squared != composed {
            return Err(format!("{name}: half-step square differs from composed tableau"));
        }
    }
    Ok(format!("midpoint and heun at order {order}"))
}

fn composed_half_steps(t: &RkTableau<Rational>) -> RkTableau<Rational> {
    let s = t.stages();
    let half = q("1/2");
    let mut a = vec![vec![Rational::zero(); 2 * s]; 2 * s];
    for i in 0..s {
        for (j, entry) in t.a()[i].iter().enumerate() {
            a[i][j] = entry.clone() * half.clone();
            a[s + i][s + j] = entry.clone() * half.clone();
        }
        for (j, weight) in t.b().iter().enumerate() {
            a[s + i][j] = weight.clone() * half.clone();
        }
    }
    let mut b = Vec::with_capacity(2 * s);
    let mut c = Vec::with_capacity(2 * s);
    for i in 0..s {
        b.push(t.b()[i].clone() * half.clone());
        c.push(t.c()[i].clone() * half.clone());
    }
    for i in 0..s {
        b.push(t.b()[i].clone() * half.clone());
        c.push(half.clone() + t.c()[i].clone() * half.clone());
    }
    RkTableau::new(a, b, c).expect("composed tableau is square")
}

fn check_io_round_trip(ctx: &mut Ctx) -> Result<String, String> {
    for i in 0..ctx.samples.min(10) {
        let a = random_group(&mut ctx.rng, ctx.order);
        if io::parse_group_element::<Rational>(&io::write_group_element(&a)).map_err(|e| e.to_string())?
            != a
        {
            return Err(format!("sample {i}: element round-trip changed the value"));
        }
        let x = random_lie(&mut ctx.rng, ctx.order);
        if io::parse_lie_element::<Rational>(&io::write_lie_element(&x)).map_err(|e| e.to_string())?
            != x
        {
            return Err(format!("sample {i}: tangent round-trip changed the value"));
        }
        let mut rng2 = ChaCha8Rng::seed_from_u64(ctx.rng.gen());
        let curve = PolyCurve::from_fn(ctx.order, |_| {
            Poly::from_coeffs((0..3).map(|_| rat(&mut rng2)).collect())
        });
        if io::parse_curve::<Rational>(&io::write_curve(&curve)).map_err(|e| e.to_string())?
            != curve
        {
            return Err(format!("sample {i}: curve round-trip changed the value"));
        }
    }
    Ok("element, tangent, and curve files".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_order_4() {
        let results = run(4, 5, 7);
        for r in &results {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 31);
    }
}
