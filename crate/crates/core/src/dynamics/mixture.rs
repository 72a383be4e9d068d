//! The GADC family built three ways: mixing maps, mixing generators and
//! mixing memory kernels.

use serde::Serialize;

use crate::channel::{gadc, mix};
use crate::dynamics::family::GadcFamily;
use crate::dynamics::generator::mixed_gadc_generator;
use crate::dynamics::recipes::gadc_kernel;
use crate::dynamics::volterra::volterra_solve;
use crate::error::{ensure_range, Result};

/// Grid points closer than this to a zero of λ(t) take the map value.
pub const ZERO_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct MixtureReport {
    pub times: Vec<f64>,
    pub map: Vec<[f64; 3]>,
    pub generator: Vec<[f64; 3]>,
    pub kernel: Vec<[f64; 3]>,
    pub map_vs_generator: f64,
    pub map_vs_kernel: f64,
    pub generator_vs_kernel: f64,
}

impl MixtureReport {
    pub fn max_deviation(&self) -> f64 {
        self.map_vs_generator
            .max(self.map_vs_kernel)
            .max(self.generator_vs_kernel)
    }
}

fn max_diff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

/// Map route: `(1 − |p|) Λ_U(t) + |p| Λ_NU^{sign p}(t)`.
fn map_route(fam: &GadcFamily, times: &[f64]) -> Result<Vec<[f64; 3]>> {
    let w = fam.p.abs();
    let sign = if fam.p >= 0.0 { 1.0 } else { -1.0 };
    times
        .iter()
        .map(|&t| {
            let l = fam.lambda(t).clamp(-1.0, 1.0);
            let ch = mix(&[gadc(l, 0.0)?, gadc(l, sign)?], &[1.0 - w, w])?;
            Ok(ch.params())
        })
        .collect()
}

/// Generator route. The mixed generator is singular where λ = 0, so each
/// interval between consecutive zeros is integrated on its own, starting
/// from the identity at t = 0 or, on later intervals, from the map value at
/// the grid point where |λ| is largest.
fn generator_route(fam: &GadcFamily, times: &[f64], map: &[[f64; 3]]) -> Result<Vec<[f64; 3]>> {
    let gen = mixed_gadc_generator(fam);
    let t_max = times.last().copied().unwrap_or(0.0);
    let zeros = fam.profile.zeros(t_max);
    let mut out = map.to_vec();

    let mut start = 0;
    let mut edges = zeros.clone();
    edges.push(f64::INFINITY);
    for (k, &edge) in edges.iter().enumerate() {
        let mut end = start;
        while end < times.len() && times[end] < edge {
            end += 1;
        }
        let idx: Vec<usize> = (start..end)
            .filter(|&i| fam.lambda(times[i]).abs() > ZERO_GUARD)
            .collect();
        start = end;
        if idx.is_empty() {
            continue;
        }
        let anchor = if k == 0 {
            idx[0]
        } else {
            *idx.iter()
                .max_by(|&&a, &&b| {
                    fam.lambda(times[a])
                        .abs()
                        .total_cmp(&fam.lambda(times[b]).abs())
                })
                .unwrap()
        };
        let anchor_value = if k == 0 && anchor == 0 {
            [1.0, 1.0, 0.0]
        } else {
            map[anchor]
        };
        let pos = idx.iter().position(|&i| i == anchor).unwrap();

        let forward: Vec<f64> = idx[pos..].iter().map(|&i| times[i]).collect();
        for (&i, v) in idx[pos..]
            .iter()
            .zip(gen.propagate(anchor_value, &forward)?)
        {
            out[i] = v;
        }
        let backward: Vec<f64> = idx[..=pos].iter().rev().map(|&i| times[i]).collect();
        for (&i, v) in idx[..=pos]
            .iter()
            .rev()
            .zip(gen.propagate(anchor_value, &backward)?)
        {
            out[i] = v;
        }
    }
    Ok(out)
}

/// Eigenvalue trajectories from the three constructions on `t_n = n·dt`
/// up to `t_max`, with their pairwise maximum deviations.
pub fn mixture_equivalence(fam: &GadcFamily, t_max: f64, dt: f64) -> Result<MixtureReport> {
    ensure_range("p", fam.p, -1.0, 1.0)?;
    let kernel = gadc_kernel(fam, t_max, dt)?;
    let solved = volterra_solve(&kernel, t_max, dt)?;
    let times = solved.times.clone();
    let kernel_route: Vec<[f64; 3]> = (0..solved.len()).map(|i| solved.at(i)).collect();
    let map = map_route(fam, &times)?;
    let generator = generator_route(fam, &times, &map)?;
    Ok(MixtureReport {
        map_vs_generator: max_diff(&map, &generator),
        map_vs_kernel: max_diff(&map, &kernel_route),
        generator_vs_kernel: max_diff(&generator, &kernel_route),
        times,
        map,
        generator,
        kernel: kernel_route,
    })
}
