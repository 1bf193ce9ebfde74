use maale_core::ModeId;
use maale_harness::checkpoint::{decode, encode, load, save, MAGIC};
use maale_harness::*;
use proptest::prelude::*;

fn trained() -> (QPolicy, TrainConfig) {
    let cfg = TrainConfig {
        lr: 0.1,
        train_steps: 2_000,
        seed: 3,
        ..TrainConfig::default()
    };
    match train_self_play("pong", ModeId(4), &cfg).unwrap() {
        Policy::Q(q) => (*q, cfg),
        _ => unreachable!(),
    }
}

#[test]
fn file_round_trip() {
    let (q, cfg) = trained();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pong.maq");
    save(&path, &q, &cfg).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], MAGIC);
    let (q2, cfg2) = load(&path).unwrap();
    assert_eq!(q, q2);
    assert_eq!(cfg, cfg2);
}

#[test]
fn corrupt_checkpoints_are_rejected() {
    let (q, cfg) = trained();
    let good = encode(&q, &cfg);
    let mut bad_magic = good.clone();
    bad_magic[3] = b'2';
    assert!(matches!(
        decode(&bad_magic),
        Err(HarnessError::Checkpoint(_))
    ));
    assert!(matches!(
        decode(&good[..good.len() - 1]),
        Err(HarnessError::Checkpoint(_))
    ));
    let mut extra = good.clone();
    extra.push(0);
    assert!(matches!(decode(&extra), Err(HarnessError::Checkpoint(_))));
    assert!(matches!(decode(&[]), Err(HarnessError::Checkpoint(_))));
}

#[test]
fn header_echoes_the_config() {
    let (q, cfg) = trained();
    let bytes = encode(&q, &cfg);
    let len = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let header: serde_json::Value = serde_json::from_slice(&bytes[8..8 + len]).unwrap();
    assert_eq!(header["config"]["gamma"], 0.99);
    assert_eq!(header["config"]["train_steps"], 2_000);
    assert_eq!(header["config"]["apex"]["buffer_size"], 80_000);
    assert_eq!(header["policy"]["game"], "video_olympics");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn arbitrary_weights_round_trip(seed in any::<u64>(), bits in 4u32..8) {
        use maale_core::rng::{rng_from_seed, Rng};
        let features = FeatureConfig { table_bits: bits, ..FeatureConfig::default() };
        let mut q = QPolicy::new("video_olympics", 4, &[maale_core::Action::Noop, maale_core::Action::Up], features);
        let mut rng = rng_from_seed(seed);
        for w in q.weights.iter_mut() {
            *w = rng.gen_range(-1e6f32..1e6);
        }
        let cfg = TrainConfig { seed, ..TrainConfig::default() };
        let (back, cfg2) = decode(&encode(&q, &cfg)).unwrap();
        prop_assert_eq!(back, q);
        prop_assert_eq!(cfg2, cfg);
    }
}
