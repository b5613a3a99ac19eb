#![allow(clippy::needless_range_loop)]

use ordkit::data::Sample;
use ordkit::encoding::{Encoding, EncodingKind, OrdinalScale};
use ordkit::model::{fit, mse_loss, train, MlpConfig, ModelParams, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Forward pass written as explicit loops over the stored layout.
fn naive_forward(params: &ModelParams, x: &[f64]) -> Vec<f64> {
    let mut a = x.to_vec();
    let last = params.layers.len() - 1;
    for (l, layer) in params.layers.iter().enumerate() {
        let mut z = vec![0.0; layer.outputs];
        for o in 0..layer.outputs {
            let mut acc = layer.bias[o];
            for i in 0..layer.inputs {
                acc += layer.weights[o * layer.inputs + i] * a[i];
            }
            z[o] = if l == last { acc } else { acc.max(0.0) };
        }
        a = z;
    }
    a
}

fn batch_loss(params: &ModelParams, x: &[f64], t: &[f64], batch: usize) -> f64 {
    let y = params.forward_batch(x, batch).unwrap();
    mse_loss(&y, t).unwrap()
}

#[test]
fn forward_matches_naive_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let config = MlpConfig {
        input_dim: 7,
        hidden_dims: vec![9, 6],
        output_dim: 4,
        init_seed: 17,
    };
    let mut params = ModelParams::init(&config).unwrap();
    for t in params.tensors_mut() {
        for v in t.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
    }
    for _ in 0..50 {
        let x = random_vec(&mut rng, 7);
        let got = params.forward(&x).unwrap();
        let want = naive_forward(&params, &x);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn mse_matches_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let y = random_vec(&mut rng, 35);
    let t = random_vec(&mut rng, 35);
    let mut sum = 0.0;
    for i in 0..35 {
        sum += (y[i] - t[i]) * (y[i] - t[i]);
    }
    assert!((mse_loss(&y, &t).unwrap() - sum / 35.0).abs() < 1e-12);
}

/// Max relative error between backprop and central differences.
pub fn gradient_check_error(hidden: Vec<usize>, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = MlpConfig {
        input_dim: 5,
        hidden_dims: hidden,
        output_dim: 3,
        init_seed: seed,
    };
    let mut params = ModelParams::init(&config).unwrap();
    for t in params.tensors_mut() {
        for v in t.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
    }
    let batch = 8;
    let x = random_vec(&mut rng, batch * 5);
    let t = random_vec(&mut rng, batch * 3);
    let (_, grads) = params.backward(&x, &t, batch).unwrap();
    let analytic: Vec<f64> = grads.tensors().flatten().copied().collect();

    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let count = params.parameter_count();
    for index in 0..count {
        let mut plus = params.clone();
        let mut minus = params.clone();
        *plus
            .tensors_mut()
            .flat_map(|t| t.iter_mut())
            .nth(index)
            .unwrap() += h;
        *minus
            .tensors_mut()
            .flat_map(|t| t.iter_mut())
            .nth(index)
            .unwrap() -= h;
        let numeric =
            (batch_loss(&plus, &x, &t, batch) - batch_loss(&minus, &x, &t, batch)) / (2.0 * h);
        let a = analytic[index];
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    worst
}

#[test]
fn gradients_match_finite_differences() {
    for seed in [1, 2, 3] {
        let err = gradient_check_error(vec![6, 4], seed);
        assert!(err <= 1e-4, "seed {seed}: relative error {err}");
    }
    assert!(gradient_check_error(vec![], 4) <= 1e-4);
}

fn memorization_set() -> (MlpConfig, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let scale = OrdinalScale::severity();
    let encoding = Encoding::new(EncodingKind::SoftProgressBar);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let inputs: Vec<Vec<f64>> = (0..8).map(|_| random_vec(&mut rng, 4)).collect();
    let targets: Vec<Vec<f64>> = (0..8)
        .map(|i| encoding.encode(&scale, i % 5 + 1).unwrap())
        .collect();
    let config = MlpConfig {
        input_dim: 4,
        hidden_dims: vec![64, 64],
        output_dim: 5,
        init_seed: 1,
    };
    (config, inputs, targets)
}

#[test]
fn memorizes_eight_samples_monotonically() {
    let (config, inputs, targets) = memorization_set();
    let train_config = TrainConfig {
        batch_size: 8,
        epochs: 500,
        lr_max: 1e-3,
        ..Default::default()
    };
    let run = fit(&config, &train_config, &inputs, &targets).unwrap();
    let last = *run.loss_history.last().unwrap();
    assert!(last < 1e-3, "final loss {last}");
    for w in run.loss_history.windows(2) {
        assert!(w[1] <= w[0], "loss rose from {} to {}", w[0], w[1]);
    }
    let again = fit(&config, &train_config, &inputs, &targets).unwrap();
    assert_eq!(run.loss_history, again.loss_history);
}

#[test]
fn identical_initialization_across_encodings() {
    let scale = OrdinalScale::severity();
    let mk = |kind: EncodingKind| {
        let d = Encoding::new(kind).vector_length(5).unwrap();
        ModelParams::init(&MlpConfig {
            input_dim: 16,
            hidden_dims: vec![32, 16],
            output_dim: d * 7,
            init_seed: 42,
        })
        .unwrap()
    };
    let one_hot = mk(EncodingKind::OneHot);
    let gauss = mk(EncodingKind::Gaussian);
    assert_eq!(one_hot, gauss);
    for kind in EncodingKind::ALL {
        let other = mk(kind);
        assert_eq!(other.layers[0], one_hot.layers[0]);
        assert_eq!(other.layers[1], one_hot.layers[1]);
    }
    assert_eq!(scale.class_count(), 5);
}

#[test]
fn train_builds_concatenated_targets() {
    let scale = OrdinalScale::new(3).unwrap();
    let encoding = Encoding::new(EncodingKind::OneHot);
    let findings = vec!["x".to_string(), "y".to_string()];
    let samples: Vec<Sample> = (0..6)
        .map(|i| Sample {
            patient_id: i,
            features: vec![i as f64 / 6.0, 1.0],
            labels: BTreeMap::from([("x".into(), (i % 3 + 1) as usize), ("y".into(), 1)]),
        })
        .collect();
    let mlp = MlpConfig {
        input_dim: 2,
        hidden_dims: vec![4],
        output_dim: 6,
        init_seed: 0,
    };
    let run = train(
        &mlp,
        &TrainConfig {
            epochs: 2,
            ..Default::default()
        },
        &samples,
        &findings,
        &encoding,
        &scale,
    )
    .unwrap();
    assert_eq!(run.loss_history.len(), 2);

    let wrong = MlpConfig {
        output_dim: 5,
        ..mlp.clone()
    };
    assert!(train(
        &wrong,
        &TrainConfig::default(),
        &samples,
        &findings,
        &encoding,
        &scale
    )
    .is_err());
    assert!(train(
        &mlp,
        &TrainConfig::default(),
        &[],
        &findings,
        &encoding,
        &scale
    )
    .is_err());
    let zero = TrainConfig {
        epochs: 0,
        ..Default::default()
    };
    assert!(train(&mlp, &zero, &samples, &findings, &encoding, &scale).is_err());
}

#[test]
fn checkpoint_roundtrips_bit_exactly() {
    use ordkit::model::Checkpoint;
    let (config, inputs, targets) = memorization_set();
    let train_config = TrainConfig {
        batch_size: 4,
        epochs: 5,
        ..Default::default()
    };
    let run = fit(&config, &train_config, &inputs, &targets).unwrap();
    let checkpoint = Checkpoint {
        mlp: config,
        train: train_config,
        encoding: Encoding::new(EncodingKind::SoftProgressBar),
        scale: OrdinalScale::severity(),
        findings: vec!["congestion".into()],
        params: run.params,
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    checkpoint.save(&path).unwrap();
    let back = Checkpoint::load(&path).unwrap();
    let bits = |c: &Checkpoint| {
        c.params
            .tensors()
            .flatten()
            .map(|v| v.to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&back), bits(&checkpoint));
    assert_eq!(back, checkpoint);
}
