use rand::Rng;

/// `n` values uniform on `[-ell, ell]`, one of them (chosen at random)
/// pushed to `±ell` so the sup-norm is exactly `ell`.
pub fn boundary_uniform<R: Rng>(rng: &mut R, n: usize, ell: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-ell..=ell)).collect();
    if n > 0 {
        let i = rng.gen_range(0..n);
        v[i] = if rng.gen::<bool>() { ell } else { -ell };
    }
    v
}

/// `n` points on the circle whose circular gaps are all at least `gap`,
/// distributed as uniform points conditioned on that event: the gaps are
/// `gap + (1 - n gap)` times a flat Dirichlet vector, then the whole
/// configuration is rotated at random.
pub fn separated_nodes<R: Rng>(rng: &mut R, n: usize, gap: f64) -> Vec<f64> {
    assert!(n as f64 * gap < 1.0, "cannot fit {n} nodes with gap {gap}");
    let weights: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let free = 1.0 - n as f64 * gap;
    let start: f64 = rng.gen();
    let mut pos = start;
    let mut nodes = Vec::with_capacity(n);
    for w in weights {
        nodes.push(pos - pos.floor());
        pos += gap + free * w / total;
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp_systems::separation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn boundary_is_hit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = boundary_uniform(&mut rng, 20, 0.2);
        let sup = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        assert_eq!(sup, 0.2);
    }

    #[test]
    fn gaps_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let u = separated_nodes(&mut rng, 16, 2.0 / 64.0);
            assert!(separation(&u).unwrap() >= 2.0 / 64.0 - 1e-12);
        }
    }
}
