use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use workbench_core::model::{DataKind, FieldShape, ParamKind, ParamRef, ParamValue, Registry};
use workbench_core::numerics::lif::{lif_step, LifParams, LifState};
use workbench_core::render::{Figure, Scope, SCOPE_CONNECTOR, SCOPE_TRACE};
use workbench_core::ImageBuffer;

use crate::engine::{DataValue, Simulation};

const SCOPE_DIRECTIVES: &str = "\
#@IVISIT:SIMULATION & lif_scope
#@IVISIT:SLIDER & I0 & [200,1] & [0,5,3,0.01] & i0 & -1 & float & 2
#@IVISIT:SLIDER & sigma & [200,1] & [0,2,3,0.01] & sigma & -1 & float & 0
#@IVISIT:SLIDER & theta & [200,1] & [0.1,3,3,0.01] & theta & -1 & float & 1
#@IVISIT:SLIDER & tau [ms] & [200,1] & [1,50,3,0.5] & tau & -1 & float & 10
#@IVISIT:SLIDER & dt [ms] & [200,1] & [0.01,1,3,0.01] & dt & -1 & float & 0.01
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,1000,3,10] & delay & -1 & int & 0
#@IVISIT:IMAGE & Voltage & 1.0 & [0,255] & im_voltage & int
#@IVISIT:TEXT_OUT & Report & [24,4] & just_left & report
";

const PLOT_DIRECTIVES: &str = "\
#@IVISIT:SIMULATION & lif_plot
#@IVISIT:DICTSLIDER & Parameters & [200,20,-1,1,10] & pars & 0
#@IVISIT:DICTSLIDERITEM & I0 & [0,5,3,0.01] & i0 & float & 2
#@IVISIT:DICTSLIDERITEM & sigma & [0,2,3,0.01] & sigma & float & 0.5
#@IVISIT:DICTSLIDERITEM & theta & [0.1,3,3,0.01] & theta & float & 1
#@IVISIT:DICTSLIDERITEM & tau [ms] & [1,50,3,0.5] & tau & float & 10
#@IVISIT:DICTSLIDERITEM & dt [ms] & [0.01,1,3,0.01] & dt & float & 0.1
#@IVISIT:SLIDER & disp_skip & [200,1] & [1,100,3,1] & disp_skip & -1 & int & 10
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,1000,3,10] & delay & -1 & int & 0
#@IVISIT:IMAGE & Voltage & 1.0 & [0,255] & im_plot & int
#@IVISIT:TEXT_OUT & Report & [24,4] & just_left & report
";

pub const SCOPE_WIDTH: usize = 400;
pub const SCOPE_HEIGHT: usize = 200;
/// Sweep length of the scope, in ms.
pub const SCOPE_WINDOW: f64 = 20.0;
const V_RANGE: (f64, f64) = (-0.25, 2.25);

fn set_lif_field(p: &mut LifParams, key: &str, v: f64) {
    match key {
        "i0" => p.i0 = v,
        "sigma" => p.sigma = v,
        "theta" => p.theta = v,
        "tau" => p.tau = v,
        "dt" => p.dt = v,
        _ => {}
    }
}

/// Shared LIF integration with spike bookkeeping.
#[derive(Debug, Clone)]
struct Neuron {
    params: LifParams,
    state: LifState,
    rng: ChaCha8Rng,
    seed: u64,
    spikes: u64,
    last_spike: Option<f64>,
    isi: Option<f64>,
}

impl Neuron {
    fn new(seed: u64, params: LifParams) -> Self {
        Self {
            params,
            state: LifState::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            spikes: 0,
            last_spike: None,
            isi: None,
        }
    }

    fn reset(&mut self) {
        self.state = LifState::default();
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.spikes = 0;
        self.last_spike = None;
        self.isi = None;
    }

    /// Advances one Euler step; returns the value to display (the spike
    /// height on a spike step) and whether it spiked.
    fn advance(&mut self) -> Option<(f64, bool)> {
        if self.params.validate().is_err() {
            return None;
        }
        let noise = if self.params.sigma > 0.0 {
            self.params.sigma * self.rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        };
        let (next, spike) = lif_step(&self.state, &self.params, noise);
        self.state = next;
        if spike > 0.0 {
            self.spikes += 1;
            if let Some(prev) = self.last_spike {
                self.isi = Some(self.state.t - prev);
            }
            self.last_spike = Some(self.state.t);
            Some((spike, true))
        } else {
            Some((self.state.v, false))
        }
    }

    fn report(&self) -> String {
        let isi = match self.isi {
            Some(isi) => format!("{isi:.4} ms"),
            None => "-".to_string(),
        };
        format!(
            "t = {:.2} ms\nv = {:.4}\nspikes = {}\nISI = {}",
            self.state.t, self.state.v, self.spikes, isi
        )
    }
}

fn gray_to_f64(buf: &ImageBuffer<u8>) -> ImageBuffer<f64> {
    buf.map(f64::from)
}

/// LIF neuron drawn into a sweeping oscilloscope.
#[derive(Debug, Clone)]
pub struct LifScope {
    neuron: Neuron,
    scope: Scope,
    v_old: Option<f64>,
    delay: u64,
}

impl LifScope {
    pub fn new(seed: u64) -> Self {
        Self {
            neuron: Neuron::new(seed, LifParams::default()),
            scope: Scope::new(SCOPE_WIDTH, SCOPE_HEIGHT, (0.0, SCOPE_WINDOW), V_RANGE).expect("valid scope"),
            v_old: None,
            delay: 0,
        }
    }

    pub fn params(&self) -> &LifParams {
        &self.neuron.params
    }

    pub fn interspike_interval(&self) -> Option<f64> {
        self.neuron.isi
    }
}

impl Simulation for LifScope {
    fn directives(&self) -> &'static str {
        SCOPE_DIRECTIVES
    }

    fn registry(&self) -> Registry {
        let mut r = Registry::default()
            .with_param("delay", FieldShape::Scalar(ParamKind::Int))
            .with_data("im_voltage", DataKind::Image)
            .with_data("report", DataKind::Text);
        for k in ["i0", "sigma", "theta", "tau", "dt"] {
            r = r.with_param(k, FieldShape::Scalar(ParamKind::Float));
        }
        r
    }

    fn set_param(&mut self, target: &ParamRef, value: &ParamValue) {
        let Some(v) = value.as_f64() else { return };
        match target.name.as_str() {
            "delay" => self.delay = v.max(0.0) as u64,
            key => set_lif_field(&mut self.neuron.params, key, v),
        }
    }

    fn init(&mut self) {
        self.neuron.reset();
        self.scope.clear();
        self.v_old = None;
    }

    fn step(&mut self) {
        if let Some((v, spiked)) = self.neuron.advance() {
            let gray = if spiked { SCOPE_CONNECTOR } else { SCOPE_TRACE };
            self.scope.set_data(self.neuron.state.t, v, self.v_old, gray);
            self.v_old = Some(if spiked { self.neuron.state.v } else { v });
        }
    }

    fn data(&self, name: &str) -> Option<DataValue> {
        match name {
            "im_voltage" => Some(DataValue::Image(gray_to_f64(self.scope.buffer()))),
            "report" => Some(DataValue::Text(self.neuron.report())),
            _ => None,
        }
    }

    fn axis(&self, data: &str) -> Option<workbench_core::render::AxisLayout> {
        (data == "im_voltage").then(|| *self.scope.axis())
    }

    fn delay_ms(&self) -> u64 {
        self.delay
    }
}

pub const PLOT_WIDTH: usize = 400;
pub const PLOT_HEIGHT: usize = 260;
/// Time span shown by the plot, in ms.
pub const PLOT_WINDOW: f64 = 50.0;

/// LIF neuron shown as a line plot, redrawn every `disp_skip` steps.
#[derive(Debug, Clone)]
pub struct LifPlot {
    neuron: Neuron,
    history: VecDeque<(f64, f64)>,
    disp_skip: u64,
    delay: u64,
    n: u64,
    image: ImageBuffer<f64>,
}

impl LifPlot {
    pub fn new(seed: u64) -> Self {
        let params = LifParams {
            sigma: 0.5,
            dt: 0.1,
            ..LifParams::default()
        };
        let mut s = Self {
            neuron: Neuron::new(seed, params),
            history: VecDeque::new(),
            disp_skip: 10,
            delay: 0,
            n: 0,
            image: ImageBuffer::rgb(PLOT_WIDTH, PLOT_HEIGHT),
        };
        s.render();
        s
    }

    fn render(&mut self) {
        let t_end = self.neuron.state.t.max(PLOT_WINDOW);
        let Ok(mut fig) = Figure::new(PLOT_WIDTH, PLOT_HEIGHT, (t_end - PLOT_WINDOW, t_end), V_RANGE) else {
            return;
        };
        let (ts, vs): (Vec<f64>, Vec<f64>) = self.history.iter().copied().unzip();
        let _ = fig.plot_line(&ts, &vs, [0, 0, 200]);
        let theta = self.neuron.params.theta;
        let _ = fig.plot_line(&[t_end - PLOT_WINDOW, t_end], &[theta, theta], [200, 0, 0]);
        fig.set_title(format!("LIF neuron, t = {:.1} ms", self.neuron.state.t));
        self.image = fig.render().0.map(f64::from);
    }
}

impl Simulation for LifPlot {
    fn directives(&self) -> &'static str {
        PLOT_DIRECTIVES
    }

    fn registry(&self) -> Registry {
        Registry::default()
            .with_param(
                "pars",
                FieldShape::Group(["i0", "sigma", "theta", "tau", "dt"].map(String::from).to_vec()),
            )
            .with_param("disp_skip", FieldShape::Scalar(ParamKind::Int))
            .with_param("delay", FieldShape::Scalar(ParamKind::Int))
            .with_data("im_plot", DataKind::Image)
            .with_data("report", DataKind::Text)
    }

    fn set_param(&mut self, target: &ParamRef, value: &ParamValue) {
        match (target.name.as_str(), value) {
            ("pars", ParamValue::Group(g)) => {
                for (k, n) in g.iter() {
                    set_lif_field(&mut self.neuron.params, k, n.as_f64());
                }
            }
            ("disp_skip", v) => self.disp_skip = v.as_f64().unwrap_or(1.0).max(1.0) as u64,
            ("delay", v) => self.delay = v.as_f64().unwrap_or(0.0).max(0.0) as u64,
            _ => {}
        }
    }

    fn init(&mut self) {
        self.neuron.reset();
        self.history.clear();
        self.n = 0;
        self.render();
    }

    fn step(&mut self) {
        if let Some((v, _)) = self.neuron.advance() {
            let t = self.neuron.state.t;
            self.history.push_back((t, v));
            if v > self.neuron.state.v {
                // vertical drop back to the reset value
                self.history.push_back((t, self.neuron.state.v));
            }
            while self.history.front().is_some_and(|(t0, _)| *t0 < t - PLOT_WINDOW) {
                self.history.pop_front();
            }
        }
        self.n += 1;
        if self.n % self.disp_skip == 0 {
            self.render();
        }
    }

    fn data(&self, name: &str) -> Option<DataValue> {
        match name {
            "im_plot" => Some(DataValue::Image(self.image.clone())),
            "report" => Some(DataValue::Text(self.neuron.report())),
            _ => None,
        }
    }

    fn frame_every(&self) -> u64 {
        self.disp_skip
    }

    fn delay_ms(&self) -> u64 {
        self.delay
    }
}
