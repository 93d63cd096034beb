//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every count, seed and limit is pinned below.

mod common;

use std::collections::HashSet;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jaccomb::abel::{abel_admissible, admissible_classes, is_twist_witness, polarization_for_twist};
use jaccomb::class_group::{build_class_group, same_class, spanning_tree_count};
use jaccomb::classification::{classify, signature_of};
use jaccomb::cli::{congruent_mod_integers, kodaira_abel_polarization};
use jaccomb::polarization::{induce_on_blocks, is_general, is_general_bruteforce};
use jaccomb::{stable_multidegrees, CurveGraph, Multidegree, Polarization};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KODAIRA_RUNTIME_LIMIT: Duration = Duration::from_secs(60);
const KODAIRA_RANGE: std::ops::RangeInclusive<usize> = 2..=5;
const CYCLE_COMPLEXITY_MAX: usize = 8;
const RANDOM_GRAPHS: usize = 50;
const RANDOM_GRAPH_MAX_COMPONENTS: usize = 6;
const RANDOM_GRAPH_MAX_MULTIPLICITY: u32 = 3;
const STABLE_PAIRS: usize = 50;
const STABLE_MAX_COMPONENTS: usize = 5;
const GENERALITY_INSTANCES: usize = 500;
const GENERALITY_MAX_COMPONENTS: usize = 6;
const TRANSLATION_SHIFTS: usize = 100;
const BLOCK_CURVES: usize = 20;
const BLOCK_MAX_BLOCKS: usize = 4;
const TWIST_INPUTS: usize = 100;
const SEED: u64 = 0x6a61_6363_6f6d_6221;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ criterion)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn md(v: &[i64]) -> Multidegree {
    Multidegree::new(v.to_vec())
}

fn kodaira_counts() -> Verdict {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in KODAIRA_RANGE {
        let g = CurveGraph::cycle(n).unwrap();
        let classes = classify(&g, 0, n as u64).unwrap();
        let refined = classify(&g, 0, 2 * n as u64).unwrap();
        ensure(classes.len() == factorial(n - 1), || {
            format!("I_{n}: {} classes, expected {}", classes.len(), factorial(n - 1))
        })?;
        ensure(refined.len() == classes.len(), || {
            format!("I_{n}: grid {} finds {} classes", 2 * n, refined.len())
        })?;
        counts.push(classes.len());
    }
    let elapsed = start.elapsed();
    ensure(elapsed < KODAIRA_RUNTIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("counts {counts:?} in {:.2?}", elapsed))
}

fn unique_abel_class() -> Verdict {
    for n in KODAIRA_RANGE {
        let g = CurveGraph::cycle(n).unwrap();
        let classes = admissible_classes(&g, classify(&g, 0, n as u64).unwrap()).unwrap();
        let admissible: Vec<_> = classes.iter().filter(|c| c.abel_admissible == Some(true)).collect();
        ensure(admissible.len() == 1, || {
            format!("I_{n}: {} admissible classes", admissible.len())
        })?;
        let target = kodaira_abel_polarization(n as u64);
        let class = admissible[0];
        ensure(congruent_mod_integers(&class.representative, &target), || {
            format!("I_{n}: representative {} not congruent to {target}", class.representative)
        })?;
        ensure(signature_of(&g, &target).unwrap() == class.signature, || {
            format!("I_{n}: signature of {target} differs from the admissible class")
        })?;
    }
    Ok("one admissible class per I_n, translation-equivalent to ((n-1)/n, ..., -(n-1)^2/n)".into())
}

fn type_iv_dichotomy() -> Verdict {
    let g = CurveGraph::cycle(3).unwrap();
    let good = Polarization::parse(&["2/3", "2/3", "-4/3"]).unwrap();
    let bad = Polarization::parse(&["1/3", "1/3", "-2/3"]).unwrap();
    let verdict = abel_admissible(&g, &good).unwrap();
    ensure(verdict.admissible, || "(2/3, 2/3, -4/3) not admissible".into())?;
    ensure(verdict.witness == Some(md(&[1, 1, -1])), || {
        format!("witness {:?}", verdict.witness)
    })?;
    ensure(is_twist_witness(&g, &good, &md(&[1, 1, -1])).unwrap(), || {
        "(1, 1, -1) rejected".into()
    })?;
    let verdict = abel_admissible(&g, &bad).unwrap();
    ensure(!verdict.admissible, || format!("(1/3, 1/3, -2/3) admissible via {:?}", verdict.witness))?;
    Ok("(2/3,2/3,-4/3) admissible with (1,1,-1); (1/3,1/3,-2/3) not".into())
}

fn complexity_identities() -> Verdict {
    for n in 1..=CYCLE_COMPLEXITY_MAX {
        let g = CurveGraph::cycle(n).unwrap();
        let order = build_class_group(&g).order().clone();
        ensure(order == BigInt::from(n), || format!("c(I_{n}) = {order}"))?;
        ensure(spanning_tree_count(&g) == BigInt::from(n), || format!("trees(I_{n})"))?;
    }
    let mut rng = rng(4);
    for k in 0..RANDOM_GRAPHS {
        let g = common::random_curve(&mut rng, RANDOM_GRAPH_MAX_COMPONENTS, RANDOM_GRAPH_MAX_MULTIPLICITY);
        let cg = build_class_group(&g);
        let product: BigInt = cg.invariant_factors().iter().product();
        let det = spanning_tree_count(&g);
        let brute = BigInt::from(common::brute_spanning_trees(&g));
        ensure(product == det && det == brute && cg.order() == &brute, || {
            format!("graph {k} {:?}: factors {product}, det {det}, brute {brute}", g.intersection_matrix())
        })?;
    }
    Ok(format!(
        "c(I_n) = n for n <= {CYCLE_COMPLEXITY_MAX}; {RANDOM_GRAPHS} random graphs agree"
    ))
}

fn component_count() -> Verdict {
    let mut rng = rng(5);
    let mut largest = 0;
    for k in 0..STABLE_PAIRS {
        let g = common::random_curve(&mut rng, STABLE_MAX_COMPONENTS, RANDOM_GRAPH_MAX_MULTIPLICITY);
        let total = rng.gen_range(-3..=3);
        let q = common::random_general(&mut rng, &g, total);
        let cg = build_class_group(&g);
        let stable = stable_multidegrees(&g, &q).unwrap();
        let keys: HashSet<_> = stable.iter().map(|d| cg.reduce(d)).collect();
        ensure(BigInt::from(stable.len()) == *cg.order(), || {
            format!("pair {k}: {} stable, c(X) = {}", stable.len(), cg.order())
        })?;
        ensure(keys.len() == stable.len(), || format!("pair {k}: two stable degrees are equivalent"))?;
        // spot check the reduction against the membership test
        for pair in stable.windows(2).take(8) {
            ensure(!same_class(&cg, &pair[0], &pair[1]).unwrap(), || {
                format!("pair {k}: {} ~ {}", pair[0], pair[1])
            })?;
        }
        largest = largest.max(stable.len());
    }
    Ok(format!("{STABLE_PAIRS} pairs, up to {largest} stable multidegrees, one per class"))
}

fn oracle_equivalence() -> Verdict {
    let mut rng = rng(6);
    let mut non_general = 0;
    for k in 0..GENERALITY_INSTANCES {
        let g = common::random_curve(&mut rng, GENERALITY_MAX_COMPONENTS, RANDOM_GRAPH_MAX_MULTIPLICITY);
        let total = rng.gen_range(-3..=3);
        let q = common::random_polarization(&mut rng, g.num_components(), total, &[1, 2, 2, 3, 4, 6]);
        let fast = is_general(&g, &q).unwrap();
        let slow = is_general_bruteforce(&g, &q).unwrap();
        ensure(fast == slow, || format!("instance {k}: {q} fast {fast} brute {slow}"))?;
        non_general += usize::from(!fast);
    }
    Ok(format!("{GENERALITY_INSTANCES} instances agree ({non_general} not general)"))
}

fn translation_invariance() -> Verdict {
    let mut rng = rng(7);
    for k in 0..TRANSLATION_SHIFTS {
        let g = if k % 2 == 0 {
            common::random_curve(&mut rng, 5, 2)
        } else {
            common::random_bridgeless(&mut rng, 5, 2)
        };
        let n = g.num_components();
        let shift: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let total = rng.gen_range(-2..=2);
        let raw = common::random_polarization(&mut rng, n, total, &[1, 2, 3, 6]);
        let moved = raw.translate(&shift).unwrap();
        ensure(is_general(&g, &raw).unwrap() == is_general(&g, &moved).unwrap(), || {
            format!("shift {k}: generality changed")
        })?;

        let q = common::random_general(&mut rng, &g, raw.total_i64().unwrap());
        let qe = q.translate(&shift).unwrap();
        let stable = stable_multidegrees(&g, &q).unwrap();
        let shifted: Vec<_> = stable.iter().map(|d| d.translate(&shift)).collect();
        ensure(stable_multidegrees(&g, &qe).unwrap() == shifted, || format!("shift {k}: stable sets"))?;
        ensure(signature_of(&g, &q).unwrap() == signature_of(&g, &qe).unwrap(), || {
            format!("shift {k}: signatures")
        })?;
        let a = abel_admissible(&g, &q).unwrap();
        let b = abel_admissible(&g, &qe).unwrap();
        ensure(a.admissible == b.admissible, || format!("shift {k}: abel verdict"))?;
        ensure(a.witness.map(|w| w.translate(&shift)) == b.witness, || format!("shift {k}: witness"))?;
    }
    Ok(format!("{TRANSLATION_SHIFTS} shifts"))
}

fn block_reduction() -> Verdict {
    let mut rng = rng(8);
    for k in 0..BLOCK_CURVES {
        let g = common::random_block_tree(&mut rng, BLOCK_MAX_BLOCKS);
        ensure(!g.separating_points().unwrap().is_empty(), || format!("curve {k} has no separating point"))?;
        let total = rng.gen_range(-2..=2);
        let q = common::random_general(&mut rng, &g, total);
        let induced = induce_on_blocks(&g, &q).unwrap();
        let q2 = &induced.polarization;
        ensure(is_general(&g, q2).unwrap(), || format!("curve {k}: q' not general"))?;
        ensure(q2.total() == q.total(), || format!("curve {k}: total changed"))?;
        for block in &induced.separation.blocks {
            let sum: num_rational::BigRational = block.components.iter().map(|&c| q2.values()[c].clone()).sum();
            ensure(sum.is_integer(), || format!("curve {k}: block total {sum}"))?;
        }
        for (block, qb) in induced.separation.blocks.iter().zip(&induced.blocks) {
            ensure(is_general(&block.graph, qb).unwrap(), || format!("curve {k}: block not general"))?;
        }
        ensure(stable_multidegrees(&g, q2).unwrap() == stable_multidegrees(&g, &q).unwrap(), || {
            format!("curve {k}: stable sets differ")
        })?;
    }
    Ok(format!("{BLOCK_CURVES} trees of cycle blocks"))
}

fn twist_round_trip() -> Verdict {
    let mut rng = rng(9);
    let mut separating = 0;
    for k in 0..TWIST_INPUTS {
        let g = if k % 4 == 3 {
            separating += 1;
            common::random_block_tree(&mut rng, 3)
        } else {
            common::random_bridgeless(&mut rng, 5, 3)
        };
        let d = Multidegree::new((0..g.num_components()).map(|_| rng.gen_range(-3..=3)).collect());
        let q = polarization_for_twist(&g, &d).unwrap();
        ensure(is_general(&g, &q).unwrap(), || format!("input {k}: {q} not general"))?;
        let verdict = abel_admissible(&g, &q).unwrap();
        ensure(verdict.admissible, || format!("input {k}: {q} not admissible"))?;
        ensure(is_twist_witness(&g, &q, &d).unwrap(), || format!("input {k}: {d} is not a witness for {q}"))?;
    }
    Ok(format!("{TWIST_INPUTS} inputs ({separating} with separating points)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Kodaira I_n class counts", kodaira_counts),
        ("unique Abel class", unique_abel_class),
        ("I_3 Abel dichotomy", type_iv_dichotomy),
        ("complexity identities", complexity_identities),
        ("stable degrees meet every class once", component_count),
        ("generality oracle", oracle_equivalence),
        ("translation invariance", translation_invariance),
        ("block reduction", block_reduction),
        ("twist round trip", twist_round_trip),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
