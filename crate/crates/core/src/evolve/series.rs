use std::sync::Arc;

use rayon::prelude::*;

use super::{Evolver, TimeGrid};
use crate::algebra::{
    expectation, KindMoments, ModelParams, OperatorCache, OperatorKind, OperatorMatrix,
};
use crate::error::{Error, Result};
use crate::fock::{Mode, Scope, StateVector};
use crate::squeeze::{Angle, SqueezeMoments};

/// A quantity recorded at every grid point.
#[derive(Debug, Clone)]
pub enum Observer {
    /// `<n_j>`, column `n_minus` / `n_zero` / `n_plus`.
    Population(Mode),
    /// `<A>` of a Hermitian, atom-number-conserving generator; column named after the tag.
    Mean(OperatorKind),
    /// `xi_phi`; fixed gives `xi_phi_fixed`, optimized gives `xi_phi_min, phi_min`.
    XiPhi(Angle),
    /// `xi_uv`; fixed gives `xi_uv_fixed`, optimized gives `xi_uv_min, alpha_min`.
    XiUv(Angle),
    /// Two-mode criterion: `xi_plus_sq, xi_minus_sq, two_mode_sum`.
    XiPm(Angle),
    /// `Re <A>` of an arbitrary operator on the evolved state's scope.
    Custom {
        name: String,
        op: Arc<OperatorMatrix>,
    },
}

impl Observer {
    pub fn columns(&self) -> Vec<String> {
        let names: &[&str] = match self {
            Observer::Population(Mode::Minus) => &["n_minus"],
            Observer::Population(Mode::Zero) => &["n_zero"],
            Observer::Population(Mode::Plus) => &["n_plus"],
            Observer::Mean(k) => return vec![k.name().to_string()],
            Observer::XiPhi(Angle::Fixed(_)) => &["xi_phi_fixed"],
            Observer::XiPhi(Angle::Optimize(_)) => &["xi_phi_min", "phi_min"],
            Observer::XiUv(Angle::Fixed(_)) => &["xi_uv_fixed"],
            Observer::XiUv(Angle::Optimize(_)) => &["xi_uv_min", "alpha_min"],
            Observer::XiPm(_) => &["xi_plus_sq", "xi_minus_sq", "two_mode_sum"],
            Observer::Custom { name, .. } => return vec![name.clone()],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Whether the values can be undefined (and carry a flag column).
    pub fn flagged(&self) -> bool {
        matches!(
            self,
            Observer::XiPhi(_) | Observer::XiUv(_) | Observer::XiPm(_)
        )
    }

    fn needs_squeeze_moments(&self) -> bool {
        self.flagged()
    }

    fn check(&self, scope: Scope) -> Result<()> {
        match self {
            Observer::Mean(k) => {
                if !k.is_hermitian() {
                    return Err(Error::contract(format!("observer {k} is not Hermitian")));
                }
                if k.block_displacement().is_some_and(|(dn, _)| dn != 0) {
                    return Err(Error::contract(format!(
                        "observer {k} changes the atom number"
                    )));
                }
                Ok(())
            }
            Observer::Custom { name, op } => {
                if op.source() != scope || op.target() != scope {
                    return Err(Error::contract(format!(
                        "observer {name} acts on {:?} -> {:?}, but the evolved state lives in {scope:?}",
                        op.source(),
                        op.target()
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// A named column; flagged columns record whether each value is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
    pub defined: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub columns: Vec<Column>,
}

impl TimeSeries {
    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

type Cell = (f64, bool);

fn evaluate(
    obs: &Observer,
    psi: &StateVector,
    km: Option<&KindMoments<'_>>,
    sq: Option<&SqueezeMoments>,
) -> Result<Vec<Cell>> {
    let sq = || sq.expect("squeeze moments computed when needed");
    Ok(match obs {
        Observer::Population(mode) => {
            let n: f64 = psi
                .iter()
                .map(|(occ, a)| occ.get(*mode) as f64 * a.norm_sqr())
                .sum();
            vec![(n, true)]
        }
        Observer::Mean(k) => {
            let km = km.expect("moments computed when needed");
            vec![(km.mean(*k)?.re, true)]
        }
        Observer::XiPhi(angle) => {
            let s = sq().xi_phi(*angle);
            match angle {
                Angle::Fixed(_) => vec![(s.value, s.defined)],
                Angle::Optimize(_) => vec![(s.value, s.defined), (s.angle, s.defined)],
            }
        }
        Observer::XiUv(angle) => {
            let s = sq().xi_uv(*angle);
            match angle {
                Angle::Fixed(_) => vec![(s.value, s.defined)],
                Angle::Optimize(_) => vec![(s.value, s.defined), (s.angle, s.defined)],
            }
        }
        Observer::XiPm(angle) => {
            let p = sq().xi_pm(*angle);
            vec![
                (p.plus_sq, p.defined),
                (p.minus_sq, p.defined),
                (p.sum, p.defined),
            ]
        }
        Observer::Custom { op, .. } => vec![(expectation(psi, op)?.re, true)],
    })
}

/// Evaluates `observers` on `exp(-iHt)|state0>` at every grid point. Rows are
/// computed in parallel and returned in grid order.
pub fn time_series(
    state0: &StateVector,
    params: &ModelParams,
    grid: &TimeGrid,
    observers: &[Observer],
) -> Result<TimeSeries> {
    let scope = match params.active_magnetic() {
        Some(_) => Scope::Full {
            total_n: state0.total_n(),
        },
        None => state0.scope(),
    };
    for obs in observers {
        obs.check(scope)?;
    }
    let spectral = Evolver::new(*params).spectral(state0)?;
    let cache = OperatorCache::new(state0.total_n());
    let need_km = observers.iter().any(|o| matches!(o, Observer::Mean(_)));
    let need_sq = observers.iter().any(Observer::needs_squeeze_moments);

    let rows: Vec<Vec<Cell>> = (0..grid.len())
        .into_par_iter()
        .map(|i| -> Result<Vec<Cell>> {
            let psi = spectral.at(grid.point(i));
            let km = need_km
                .then(|| KindMoments::new(&cache, &psi))
                .transpose()?;
            let sq = need_sq
                .then(|| SqueezeMoments::new(&cache, &psi))
                .transpose()?;
            let mut row = Vec::new();
            for obs in observers {
                row.extend(evaluate(obs, &psi, km.as_ref(), sq.as_ref())?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut columns = Vec::new();
    for obs in observers {
        for name in obs.columns() {
            columns.push(Column {
                name,
                values: Vec::with_capacity(rows.len()),
                defined: obs.flagged().then(Vec::new),
            });
        }
    }
    for row in &rows {
        for (col, (v, ok)) in columns.iter_mut().zip(row) {
            col.values.push(*v);
            if let Some(d) = col.defined.as_mut() {
                d.push(*ok);
            }
        }
    }
    Ok(TimeSeries {
        t: grid.points(),
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeOccupation;
    use std::f64::consts::PI;

    fn pops() -> Vec<Observer> {
        vec![
            Observer::Population(Mode::Minus),
            Observer::Population(Mode::Zero),
            Observer::Population(Mode::Plus),
        ]
    }

    #[test]
    fn populations_of_polar_fock_state() {
        let psi = StateVector::basis_state(&ModeOccupation::new(0, 30, 0));
        let grid = TimeGrid::new(0.0, PI, 16).unwrap();
        let ts = time_series(&psi, &ModelParams::default(), &grid, &pops()).unwrap();
        assert_eq!(ts.column("n_zero").unwrap().values[0], 30.0);
        for i in 0..ts.len() {
            let total: f64 = ["n_minus", "n_zero", "n_plus"]
                .iter()
                .map(|c| ts.column(c).unwrap().values[i])
                .sum();
            assert!((total - 30.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_mismatched_custom_observer() {
        let psi = StateVector::basis_state(&ModeOccupation::new(1, 3, 1));
        let op = crate::algebra::operator_on(OperatorKind::T3, Scope::Full { total_n: 5 }).unwrap();
        let obs = [Observer::Custom {
            name: "t3".into(),
            op: Arc::new(op),
        }];
        let grid = TimeGrid::default();
        assert!(matches!(
            time_series(&psi, &ModelParams::default(), &grid, &obs),
            Err(Error::Contract(_))
        ));
        let obs = [Observer::Mean(OperatorKind::TPlus)];
        assert!(time_series(&psi, &ModelParams::default(), &grid, &obs).is_err());
    }

    #[test]
    fn flagged_columns() {
        let psi = StateVector::basis_state(&ModeOccupation::new(0, 8, 0));
        let grid = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let obs = [
            Observer::XiUv(Angle::optimize()),
            Observer::Mean(OperatorKind::Y),
        ];
        let ts = time_series(&psi, &ModelParams::default(), &grid, &obs).unwrap();
        let names: Vec<&str> = ts.columns.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["xi_uv_min", "alpha_min", "Y"]);
        assert!(ts.column("xi_uv_min").unwrap().defined.is_some());
        assert!(ts.column("Y").unwrap().defined.is_none());
        assert!((ts.column("xi_uv_min").unwrap().values[0] - 0.75).abs() < 1e-12);
    }
}
