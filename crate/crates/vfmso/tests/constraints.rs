use apdi_vfmso::{decode, generate_instance, init_chromosome, Operation, VfmsoInstance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn overlaps(a: &Operation, b: &Operation) -> bool {
    a.start < b.end() && b.start < a.end()
}

fn count_conflicts(ops: &[Operation]) -> (usize, usize) {
    let mut team = 0;
    let mut car = 0;
    for (x, a) in ops.iter().enumerate() {
        for b in &ops[x + 1..] {
            if overlaps(a, b) {
                team += usize::from(a.team == b.team);
                car += usize::from(a.car == b.car);
            }
        }
    }
    (team, car)
}

#[test]
fn v1_random_chromosomes_decode_without_overlaps() {
    let instance = generate_instance(20, 3, &mut ChaCha8Rng::seed_from_u64(2024)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let c = init_chromosome(&instance, &mut rng);
        assert!(c.is_valid(&instance));
        let schedule = decode(&c, &instance);
        assert_eq!(count_conflicts(&schedule.operations), (0, 0));
    }
}

#[test]
fn generated_instance_round_trips_through_file() {
    let instance = generate_instance(30, 5, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let dir = std::env::temp_dir().join(format!("apdi-vfmso-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v2.toml");
    instance.save(&path).unwrap();
    let back = VfmsoInstance::load(&path).unwrap();
    assert_eq!(back, instance);
    back.save(&path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), instance.to_toml_string().unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_component_is_maintained_once(seed in any::<u64>(), cars in 1usize..6, shops in 1usize..4) {
        let instance = generate_instance(cars, shops, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let c = init_chromosome(&instance, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let schedule = decode(&c, &instance);
        let mut seen = vec![0usize; instance.num_components()];
        for op in &schedule.operations {
            for &j in &c.cars[op.car][op.group].members {
                seen[instance.component_index(op.car, j)] += 1;
                prop_assert_eq!(schedule.maintenance_dates[op.car][j], op.start);
            }
        }
        prop_assert!(seen.iter().all(|&n| n == 1));
        prop_assert_eq!(count_conflicts(&schedule.operations), (0, 0));
    }
}
