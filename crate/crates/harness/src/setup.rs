//! Method, direction and parameter choices for one solver run.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use flexkit::directions::{AndersonDirections, DirectionProvider, NegativeResidual, NewtonDirections, ZeroDirection};
use flexkit::solvers::{run, IterationTrace, Method, SolverConfig};

use crate::problem::BuiltProblem;

pub const DEFAULT_MEMORY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionKind {
    None,
    /// `d = −R_γ(z)`.
    Residual,
    Aa1,
    Aa2,
    Newton,
}

impl DirectionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DirectionKind::None => "none",
            DirectionKind::Residual => "residual",
            DirectionKind::Aa1 => "aa1",
            DirectionKind::Aa2 => "aa2",
            DirectionKind::Newton => "newton",
        }
    }
}

impl fmt::Display for DirectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DirectionKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => DirectionKind::None,
            "residual" => DirectionKind::Residual,
            "aa1" => DirectionKind::Aa1,
            "aa2" => DirectionKind::Aa2,
            "newton" => DirectionKind::Newton,
            other => bail!("unknown direction `{other}` (expected none, residual, aa1, aa2 or newton)"),
        })
    }
}

#[derive(Debug, Clone)]
pub struct MethodSetup {
    pub method: Method,
    pub direction: DirectionKind,
    pub memory: usize,
    pub newton_c: f64,
    pub config: SolverConfig,
}

impl MethodSetup {
    /// Default parameters for `method`; line-search methods default to AA-II.
    pub fn new(method: Method) -> Self {
        let config = if method == Method::IFlex { SolverConfig::iflex() } else { SolverConfig::default() };
        let direction = if method.uses_directions() { DirectionKind::Aa2 } else { DirectionKind::None };
        Self { method, direction, memory: DEFAULT_MEMORY, newton_c: 1.0, config }
    }

    pub fn provider(&self) -> Result<Box<dyn DirectionProvider<f64>>> {
        if self.memory == 0 {
            bail!("memory must be at least 1");
        }
        if !(self.newton_c > 0.0) {
            bail!("Newton regularization constant must be positive");
        }
        Ok(match self.direction {
            DirectionKind::None => Box::new(ZeroDirection),
            DirectionKind::Residual => Box::new(NegativeResidual),
            DirectionKind::Aa1 => Box::new(AndersonDirections::type1(self.memory)),
            DirectionKind::Aa2 => Box::new(AndersonDirections::type2(self.memory)),
            DirectionKind::Newton => Box::new(NewtonDirections::new(self.newton_c)),
        })
    }

    /// Short label such as `flex-aa2`.
    pub fn label(&self) -> String {
        if self.method.uses_directions() {
            format!("{}-{}", self.method, self.direction)
        } else {
            self.method.to_string()
        }
    }

    pub fn run(&self, problem: &BuiltProblem) -> Result<IterationTrace<f64>> {
        let mut provider = self.provider()?;
        Ok(run(&problem.instance, &self.config, self.method, provider.as_mut(), &problem.start)?)
    }
}
