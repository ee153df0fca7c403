use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sas_core::knowledge::{knowledge_symbiosis_gain, Concept, KnowledgeBase, KnowledgeGain};
use sas_core::model::Ident;

fn id(s: String) -> Ident {
    Ident::new(&s).unwrap()
}

fn random_concept(rng: &mut ChaCha8Rng, name: &str) -> Concept {
    let mut pick = |prefix: &str| -> Vec<Ident> {
        let n = rng.gen_range(0..=5);
        (0..n).map(|i| id(format!("{prefix}{i}"))).collect()
    };
    let (attrs, objs, ins, outs) = (pick("a"), pick("o"), pick("in"), pick("out"));
    Concept::new(id(name.to_string()))
        .with_attributes(attrs)
        .with_objects(objs)
        .with_inputs(ins)
        .with_outputs(outs)
}

fn cross<'a, T>(x: &'a BTreeSet<T>, y: &'a BTreeSet<T>) -> Vec<(&'a T, &'a T)> {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| (a, b)))
        .collect()
}

/// Counts each term by materializing the relation sets.
fn brute_force(ci: &Concept, cj: &Concept) -> KnowledgeGain {
    let intension = cross(&ci.attributes, &cj.attributes).len() as u64;
    let extension = cross(&ci.objects, &cj.objects).len() as u64;
    let internal = (cross(&ci.objects, &ci.attributes).len()
        + cross(&cj.objects, &cj.attributes).len()) as u64;
    let input = cross(&ci.inputs, &cj.inputs).len() as u64;
    let output = cross(&ci.outputs, &cj.outputs).len() as u64;
    KnowledgeGain {
        intension,
        extension,
        internal,
        input,
        output,
        total: intension + extension + internal + input + output,
    }
}

#[test]
fn symbiosis_gain_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a5);
    for _ in 0..500 {
        let ci = random_concept(&mut rng, "left");
        let cj = random_concept(&mut rng, "right");
        let g = knowledge_symbiosis_gain(std::slice::from_ref(&ci), std::slice::from_ref(&cj));
        assert_eq!(g, brute_force(&ci, &cj));
        assert_eq!(g, knowledge_symbiosis_gain(&[cj], &[ci]));
    }
}

#[test]
fn set_gain_sums_over_cross_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let left: Vec<Concept> = (0..3)
            .map(|i| random_concept(&mut rng, &format!("l{i}")))
            .collect();
        let right: Vec<Concept> = (0..2)
            .map(|i| random_concept(&mut rng, &format!("r{i}")))
            .collect();
        let total: u64 = left
            .iter()
            .flat_map(|a| right.iter().map(move |b| brute_force(a, b).total))
            .sum();
        assert_eq!(knowledge_symbiosis_gain(&left, &right).total, total);
    }
}

fn flat_base(n: usize) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    for i in 0..n {
        kb.insert_concept(Concept::new(id(format!("c{i}"))))
            .unwrap();
    }
    kb
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[test]
fn composition_counts() {
    for n in 2..=6 {
        let once = flat_base(n).compose_layer().unwrap();
        assert_eq!(once.top_width(), choose2(n));
        let twice = once.compose_layer().unwrap();
        assert_eq!(twice.top_width(), choose2(choose2(n)));
        assert_eq!(
            twice.entire_knowledge_measure().0 as usize,
            choose2(n) + choose2(choose2(n))
        );
        let first = &twice.layers()[0];
        assert!(twice.layers()[1]
            .records
            .iter()
            .all(|r| r.left < r.right && r.right < first.records.len()));
        let distinct: BTreeSet<_> = twice.layers()[1].records.iter().collect();
        assert_eq!(distinct.len(), twice.top_width());
    }
}
