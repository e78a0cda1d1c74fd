//! Browser bindings for three interactive profiles:
//!
//! * `kernel_profile`: `eps_{m,1}(x, t)` across `[-w, w]`,
//! * `potential_profile`: the order-`m` volume potential of a Gaussian bump
//!   on `[-1, 1]` at time `t`,
//! * `ramp_profile`: the first-order solution on `[0, 1]` driven by ramp
//!   boundary data through the Dirichlet Green function.
//!
//! Each returns the sampled values on an equispaced grid including both ends.
//! The plain functions in [`profiles`] carry the logic so they can be tested
//! natively; the exported wrappers only convert errors.

use wasm_bindgen::prelude::*;

pub mod profiles {
    use heatpot::geometry::Domain;
    use heatpot::greens::{interval_boundary_term, GreenEvalParams};
    use heatpot::kernel::iterated_kernel;
    use heatpot::potentials::{source_region, HeatPotential};
    use heatpot::quadrature::{make_volume_rule_on, TimeGrading, TimeRule};
    use heatpot::source::{BoundaryDataSpec, GaussianBump, Source, SourceSpec, TimeProfile};
    use heatpot::{HeatError, KernelOrder, Result, SpaceVec};

    pub const MAX_SAMPLES: usize = 2001;

    fn grid(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
        if !(2..=MAX_SAMPLES).contains(&samples) {
            return Err(HeatError::Argument(format!("samples must be in 2..={MAX_SAMPLES}, got {samples}")));
        }
        let h = (hi - lo) / (samples - 1) as f64;
        Ok((0..samples).map(|i| if i + 1 == samples { hi } else { lo + h * i as f64 }).collect())
    }

    pub fn kernel_profile(m: u32, t: f64, half_width: f64, samples: usize) -> Result<Vec<f64>> {
        let order = KernelOrder::new(m, 1)?;
        if half_width.is_nan() || half_width <= 0.0 {
            return Err(HeatError::Argument("half_width must be > 0".into()));
        }
        Ok(grid(-half_width, half_width, samples)?
            .into_iter()
            .map(|x| iterated_kernel(order, &SpaceVec::d1(x), t))
            .collect())
    }

    pub fn potential_profile(m: u32, width: f64, t: f64, samples: usize) -> Result<Vec<f64>> {
        let order = KernelOrder::new(m, 1)?;
        let domain = Domain::Interval { a: -1.0, b: 1.0 };
        let spec = SourceSpec::GaussianBump(GaussianBump {
            center: vec![0.0],
            width,
            amplitude: 1.0,
            time_profile: TimeProfile::Constant,
        });
        let src = Source::new(spec, domain)?;
        src.validate_support()?;
        let xs = grid(-1.0, 1.0, samples)?;
        if t <= 0.0 {
            return Ok(vec![0.0; samples]);
        }
        let vrule = make_volume_rule_on(&domain, &source_region(&domain, &src), 48)?;
        let pot = HeatPotential::new(order, &src, domain, vrule, TimeGrading::graded(8, 4));
        xs.iter().map(|x| pot.value(&SpaceVec::d1(*x), t)).collect()
    }

    pub fn ramp_profile(amplitude: f64, rise_time: f64, t: f64, samples: usize) -> Result<Vec<f64>> {
        let domain = Domain::Interval { a: 0.0, b: 1.0 };
        let phi = BoundaryDataSpec::Ramp { amplitude, rise_time };
        phi.validate()?;
        let xs = grid(0.0, 1.0, samples)?;
        if t <= 0.0 {
            return Ok(vec![0.0; samples]);
        }
        let trule = TimeRule::new(t, TimeGrading::graded(16, 6))?;
        let params = GreenEvalParams::default();
        xs.iter()
            .map(|x| interval_boundary_term(&phi, &domain, &trule, *x, t, &params).map(|w| w.value))
            .collect()
    }
}

fn js<T>(r: heatpot::Result<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn kernel_profile(m: u32, t: f64, half_width: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    js(profiles::kernel_profile(m, t, half_width, samples))
}

#[wasm_bindgen]
pub fn potential_profile(m: u32, width: f64, t: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    js(profiles::potential_profile(m, width, t, samples))
}

#[wasm_bindgen]
pub fn ramp_profile(amplitude: f64, rise_time: f64, t: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    js(profiles::ramp_profile(amplitude, rise_time, t, samples))
}
