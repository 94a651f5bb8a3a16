use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct GroverPoint {
    pub t: usize,
    pub simulated: f64,
    pub closed_form: f64,
    /// Small-angle approximation `(2T+1)²/N`.
    pub small_angle: f64,
}

/// Success probability of `t` Grover iterations over `n_search` items with one marked item,
/// from a direct statevector simulation, next to `sin²((2t+1)·asin(1/√n))`.
pub fn grover_invert(n_search: usize, t: usize, marked: usize) -> Result<GroverPoint> {
    if n_search < 2 || marked >= n_search {
        return Err(Error::Parameter(format!("need n >= 2 and marked < n (n={n_search}, marked={marked})")));
    }
    let nf = n_search as f64;
    let mut amps = vec![1.0 / nf.sqrt(); n_search];
    for _ in 0..t {
        amps[marked] = -amps[marked];
        let mean = amps.iter().sum::<f64>() / nf;
        for a in amps.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
    let theta = (1.0 / nf.sqrt()).asin();
    let k = (2 * t + 1) as f64;
    Ok(GroverPoint {
        t,
        simulated: amps[marked] * amps[marked],
        closed_form: (k * theta).sin().powi(2),
        small_angle: k * k / nf,
    })
}

/// Goodness of fit of simulated success against the small-angle model over a range of `T`.
#[derive(Clone, Debug, Serialize)]
pub struct GroverFit {
    pub n: usize,
    pub points: Vec<GroverPoint>,
    pub max_closed_form_error: f64,
    /// `1 - SS_res/SS_tot` with the model used as the prediction directly.
    pub r2_fixed: f64,
    /// Least-squares `p ≈ a + b·(2T+1)²/N`.
    pub r2_affine: f64,
    pub affine_intercept: f64,
    pub affine_slope: f64,
}

fn r_squared(obs: &[f64], pred: &[f64]) -> f64 {
    let mean = obs.iter().sum::<f64>() / obs.len() as f64;
    let ss_tot: f64 = obs.iter().map(|o| (o - mean).powi(2)).sum();
    let ss_res: f64 = obs.iter().zip(pred).map(|(o, p)| (o - p).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

pub fn grover_fit(n: usize, ts: impl IntoIterator<Item = usize>) -> Result<GroverFit> {
    let points = ts.into_iter().map(|t| grover_invert(n, t, n - 1)).collect::<Result<Vec<_>>>()?;
    if points.len() < 3 {
        return Err(Error::Parameter("fit needs at least three values of T".into()));
    }
    let obs: Vec<f64> = points.iter().map(|p| p.simulated).collect();
    let xs: Vec<f64> = points.iter().map(|p| p.small_angle).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, obs.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&obs).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let affine: Vec<f64> = xs.iter().map(|x| intercept + slope * x).collect();
    Ok(GroverFit {
        n,
        max_closed_form_error: points.iter().map(|p| (p.simulated - p.closed_form).abs()).fold(0.0, f64::max),
        r2_fixed: r_squared(&obs, &xs),
        r2_affine: r_squared(&obs, &affine),
        affine_intercept: intercept,
        affine_slope: slope,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_items_one_iteration_is_certain() {
        let p = grover_invert(4, 1, 2).unwrap();
        assert!((p.simulated - 1.0).abs() < 1e-14);
        assert!((p.closed_form - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_iterations_is_uniform() {
        let p = grover_invert(10, 0, 3).unwrap();
        assert!((p.simulated - 0.1).abs() < 1e-15);
    }

    #[test]
    fn simulation_tracks_closed_form() {
        for n in [16usize, 100, 1024] {
            for t in 0..12 {
                let p = grover_invert(n, t, 0).unwrap();
                assert!((p.simulated - p.closed_form).abs() < 1e-10, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn r_squared_of_exact_model_is_one() {
        assert!((r_squared(&[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_arguments() {
        assert!(grover_invert(1, 0, 0).is_err());
        assert!(grover_invert(4, 0, 4).is_err());
        assert!(grover_fit(16, 1..3).is_err());
    }
}
