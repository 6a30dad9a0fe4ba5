//! Builds library models from a parsed `[model]` section.

use nalgebra::{DMatrix, DVector};
use symhyp::entropy::EntropyPair;
use symhyp::lxf::Evolution;
use symhyp::models::ck::C64;
use symhyp::models::{self, ConstraintMonitor, TricomiModel, WaveCoefficients};
use symhyp::{ConservationLaw, Result, Sample, StateBox, SystemDef};

use crate::config::ModelSpec;

pub enum ModelKind {
    Law { law: ConservationLaw, pair: Option<EntropyPair> },
    System { system: SystemDef, constraints: Vec<ConstraintMonitor>, sample_box: StateBox, linear: bool },
    Tricomi(TricomiModel),
}

pub struct Model {
    pub spec: ModelSpec,
    pub kind: ModelKind,
}

fn unit_box(m: usize) -> StateBox {
    StateBox::new(vec![-1.0; m], vec![1.0; m])
}

pub fn build_model(spec: &ModelSpec) -> Result<Model> {
    let kind = match spec {
        ModelSpec::Burgers { u_min, u_max } => ModelKind::Law {
            law: models::burgers(StateBox::new(vec![*u_min], vec![*u_max]))?,
            pair: Some(models::burgers_entropy_pair()),
        },
        ModelSpec::Advection { speed, u_min, u_max } => ModelKind::Law {
            law: models::advection(*speed, StateBox::new(vec![*u_min], vec![*u_max]))?,
            pair: Some(models::polynomial_entropy_pair(&[0.0, *speed])),
        },
        ModelSpec::Scalar { flux_coeffs, u_min, u_max } => ModelKind::Law {
            law: models::polynomial_law(flux_coeffs.clone(), StateBox::new(vec![*u_min], vec![*u_max]))?,
            pair: Some(models::polynomial_entropy_pair(flux_coeffs)),
        },
        ModelSpec::Wave { dim, drift, metric_diag } => {
            let metric = DMatrix::from_diagonal(&DVector::from_column_slice(metric_diag));
            let wave = models::wave_system(WaveCoefficients::constant(drift.clone(), metric), &[vec![0.0; *dim]])?;
            ModelKind::System {
                system: wave.system,
                constraints: vec![wave.constraint],
                sample_box: unit_box(dim + 2),
                linear: true,
            }
        }
        ModelSpec::Maxwell => {
            let mx = models::maxwell_system(None, None);
            ModelKind::System {
                system: mx.system,
                constraints: vec![mx.div_e, mx.div_b],
                sample_box: unit_box(6),
                linear: true,
            }
        }
        ModelSpec::EulerSh { dim, gamma } => ModelKind::System {
            system: models::euler_polytropic_sh(*dim, *gamma)?,
            constraints: Vec::new(),
            sample_box: models::euler_sh_box(*dim),
            linear: false,
        },
        ModelSpec::EulerCons { gamma } => ModelKind::Law {
            law: models::euler_conservative_1d(*gamma, StateBox::new(vec![0.1, -10.0, 0.5], vec![10.0, 10.0, 50.0]))?,
            pair: None,
        },
        ModelSpec::Tricomi { lambda, y_bound } => ModelKind::Tricomi(models::tricomi_system(*lambda, *y_bound)?),
        ModelSpec::Ck { a_re, a_im } => {
            let ck = models::ck_realify(&DMatrix::from_element(1, 1, C64::new(*a_re, *a_im)), None)?;
            ModelKind::System {
                system: ck.system,
                constraints: vec![ck.cauchy_riemann],
                sample_box: unit_box(2),
                linear: true,
            }
        }
    };
    Ok(Model { spec: spec.clone(), kind })
}

impl Model {
    pub fn evolution(&self) -> Option<&dyn Evolution> {
        match &self.kind {
            ModelKind::Law { law, .. } => Some(law),
            ModelKind::System { system, .. } => Some(system),
            ModelKind::Tricomi(_) => None,
        }
    }

    pub fn law(&self) -> Option<&ConservationLaw> {
        match &self.kind {
            ModelKind::Law { law, .. } => Some(law),
            _ => None,
        }
    }

    /// Quasi-linear form used by the hyperbolicity check.
    pub fn quasilinear(&self) -> Option<SystemDef> {
        match &self.kind {
            ModelKind::Law { law, .. } => Some(law.quasilinear()),
            ModelKind::System { system, .. } => Some(system.clone()),
            ModelKind::Tricomi(_) => None,
        }
    }

    pub fn sample_box(&self) -> Option<&StateBox> {
        match &self.kind {
            ModelKind::Law { law, .. } => Some(&law.state_box),
            ModelKind::System { sample_box, .. } => Some(sample_box),
            ModelKind::Tricomi(_) => None,
        }
    }

    /// Constant energy weight `Q = σM⁰` of a linear model.
    pub fn energy_weight(&self) -> Result<Option<DMatrix<f64>>> {
        match &self.kind {
            ModelKind::Law { .. } if matches!(self.spec, ModelSpec::Advection { .. }) => Ok(Some(DMatrix::identity(1, 1))),
            ModelKind::System { system, linear: true, .. } => {
                let x = vec![0.0; system.n + 1];
                Ok(Some(system.metric(&x, &vec![0.0; system.m])?))
            }
            _ => Ok(None),
        }
    }

    /// State samples (with `x = 0`) on a tensor grid of `points` per axis.
    pub fn state_samples(&self, points: usize) -> Vec<Sample> {
        let Some(b) = self.sample_box() else {
            return Vec::new();
        };
        let n = self.spec.layout().map_or(1, |l| l.0);
        b.tensor_grid(points).into_iter().map(|u| Sample::state(n, u)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::MODELS;
    use symhyp::system::is_sh;

    fn spec_for(name: &str) -> ModelSpec {
        match name {
            "burgers" => ModelSpec::Burgers { u_min: -2.0, u_max: 2.0 },
            "advection" => ModelSpec::Advection { speed: 1.0, u_min: -1.0, u_max: 1.0 },
            "scalar" => ModelSpec::Scalar {
                flux_coeffs: vec![0.0, 1.0, 0.5],
                u_min: -1.0,
                u_max: 1.0,
            },
            "wave" => ModelSpec::Wave {
                dim: 2,
                drift: vec![0.1, 0.0],
                metric_diag: vec![1.0, 2.0],
            },
            "maxwell" => ModelSpec::Maxwell,
            "euler_sh" => ModelSpec::EulerSh { dim: 2, gamma: 1.4 },
            "euler_cons" => ModelSpec::EulerCons { gamma: 1.4 },
            "tricomi" => ModelSpec::Tricomi { lambda: 0.1, y_bound: 1.0 },
            "ck" => ModelSpec::Ck { a_re: 1.0, a_im: 0.5 },
            _ => unreachable!(),
        }
    }

    #[test]
    fn every_listed_model_builds() {
        for info in MODELS {
            let model = build_model(&spec_for(info.name)).unwrap();
            assert_eq!(model.spec.name(), info.name);
            if let (Some(sys), Some((_, m))) = (model.quasilinear(), model.spec.layout()) {
                assert_eq!(sys.m, m, "{}", info.name);
            }
        }
    }

    #[test]
    fn symmetric_models_pass_is_sh() {
        for name in ["burgers", "advection", "wave", "maxwell", "euler_sh", "ck"] {
            let model = build_model(&spec_for(name)).unwrap();
            let verdict = is_sh(&model.quasilinear().unwrap(), &model.state_samples(3)).unwrap();
            assert!(verdict.holds(), "{name}: {verdict:?}");
        }
    }

    #[test]
    fn energy_weights() {
        let wave = build_model(&spec_for("wave")).unwrap();
        let q = wave.energy_weight().unwrap().unwrap();
        assert_eq!(q[(2, 2)], 2.0);
        assert!(build_model(&spec_for("burgers")).unwrap().energy_weight().unwrap().is_none());
    }
}
