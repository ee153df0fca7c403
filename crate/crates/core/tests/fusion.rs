use sas_core::fusion::{fuse, gain_oracle, symbiotic_gain};
use sas_core::model::{new_system, potential_relation_count, RelationKind, System};
use sas_core::topology::try_big_r_fold;

fn sized(name: &str, prefix: &str, n: usize) -> System {
    let comps: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    new_system(name, &refs, &[]).unwrap()
}

#[test]
fn three_way_equivalence_up_to_ten() {
    for n1 in 0..=10 {
        for n2 in 0..=10 {
            let (s1, s2) = (sized("A", "a", n1), sized("B", "b", n2));
            let fused = fuse(&s1, &s2).unwrap();
            let oracle = gain_oracle(&s1, &s2).unwrap();
            assert_eq!(u128::from(fused.gain), symbiotic_gain(n1 as u64, n2 as u64));
            assert_eq!(fused.gain, oracle);
            assert_eq!(fused.delta.len() as u64, fused.gain);
            assert_eq!(
                potential_relation_count(&fused.fused),
                potential_relation_count(&s1) + potential_relation_count(&s2) + fused.gain
            );
        }
    }
}

#[test]
fn three_plus_two_gives_twelve() {
    let r = fuse(&sized("S1", "x", 3), &sized("S2", "y", 2)).unwrap();
    assert_eq!(r.gain, 12);
    assert_eq!(r.fused.name(), "S1⊞S2");
    assert!(r
        .delta
        .iter()
        .all(|(a, b)| a.as_str().starts_with('x') != b.as_str().starts_with('x')));
    assert_eq!(r.fused.relations(RelationKind::Component).len(), 12);
}

#[test]
fn folded_gain_is_sum_over_pairs() {
    let sizes = [1usize, 4, 2, 0, 3, 5];
    let systems: Vec<System> = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| sized(&format!("S{i}"), &format!("p{i}_"), n))
        .collect();
    let mut total = 0u64;
    let folded = try_big_r_fold(systems, |a, b| {
        let r = fuse(&a, &b)?;
        total += r.gain;
        Ok::<_, sas_core::fusion::FusionError>(r.fused)
    })
    .unwrap()
    .unwrap();
    let pairs: u64 = (0..sizes.len())
        .flat_map(|i| (i + 1..sizes.len()).map(move |j| 2 * sizes[i] as u64 * sizes[j] as u64))
        .sum();
    assert_eq!(total, pairs);
    assert_eq!(folded.components().len(), sizes.iter().sum::<usize>());
}

#[test]
fn overlap_is_rejected() {
    let s1 = new_system("A", &["x", "y"], &[]).unwrap();
    let s2 = new_system("B", &["y", "z"], &[]).unwrap();
    assert!(fuse(&s1, &s2).is_err());
    assert!(gain_oracle(&s1, &s2).is_err());
}

#[test]
fn closed_form_saturates() {
    assert_eq!(symbiotic_gain(u64::MAX, u64::MAX), u128::MAX);
}
