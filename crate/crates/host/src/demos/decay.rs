use workbench_core::model::{DataKind, FieldShape, ParamKind, ParamRef, ParamValue, Registry};
use workbench_core::numerics::decay_step;

use crate::engine::{DataValue, Simulation};

const DIRECTIVES: &str = "\
#@IVISIT:SIMULATION & decay
#@IVISIT:SLIDER & Decay Factor & [200,1] & [0,1,3,0.01] & decay & -1 & float & 0.9
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,1000,3,10] & delay & -1 & int & 0
#@IVISIT:TEXT_OUT & Report & [20,3] & just_left & report
";

/// x(n+1) = decay * x(n), starting from x = 100.
#[derive(Debug, Clone)]
pub struct Decay {
    decay: f64,
    delay: u64,
    x: f64,
    n: u64,
}

impl Default for Decay {
    fn default() -> Self {
        Self {
            decay: 0.9,
            delay: 0,
            x: 100.0,
            n: 0,
        }
    }
}

impl Decay {
    pub fn x(&self) -> f64 {
        self.x
    }
}

impl Simulation for Decay {
    fn directives(&self) -> &'static str {
        DIRECTIVES
    }

    fn registry(&self) -> Registry {
        Registry::default()
            .with_param("decay", FieldShape::Scalar(ParamKind::Float))
            .with_param("delay", FieldShape::Scalar(ParamKind::Int))
            .with_data("report", DataKind::Text)
    }

    fn set_param(&mut self, target: &ParamRef, value: &ParamValue) {
        match (target.name.as_str(), value.as_f64()) {
            ("decay", Some(v)) => self.decay = v,
            ("delay", Some(v)) => self.delay = v.max(0.0) as u64,
            _ => {}
        }
    }

    fn init(&mut self) {
        self.x = 100.0;
        self.n = 0;
    }

    fn step(&mut self) {
        self.x = decay_step(self.x, self.decay);
        self.n += 1;
    }

    fn data(&self, name: &str) -> Option<DataValue> {
        (name == "report").then(|| DataValue::Text(format!("step={}\nx = {}", self.n, self.x)))
    }

    fn delay_ms(&self) -> u64 {
        self.delay
    }
}
