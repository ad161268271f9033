use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use workbench_core::automaton::{ActionCommand, AutomatonConfig};
use workbench_core::model::{DataKind, FieldShape, ParamKind, ParamRef, ParamValue, Registry};
use workbench_core::render::AxisLayout;
use workbench_core::ImageBuffer;

use super::points::{parse_label, rasterize, Covariance, Points, EDIT_ACTIONS};
use crate::engine::{BindError, Binder, DataValue, Simulation};

const DIRECTIVES: &str = "\
#@IVISIT:SIMULATION & datagen
#@IVISIT:RADIOBUTTON & Action & [New,Delete,Move] & action & New
#@IVISIT:RADIOBUTTON & Class & [+1,-1] & class & +1
#@IVISIT:SLIDER & N & [200,1] & [1,100,3,1] & n_new & -1 & int & 20
#@IVISIT:DICTSLIDER & Covariance & [200,20,-1,1,10] & cov & 0
#@IVISIT:DICTSLIDERITEM & sxx & [0.01,1,3,0.01] & sxx & float & 0.1
#@IVISIT:DICTSLIDERITEM & syy & [0.01,1,3,0.01] & syy & float & 0.1
#@IVISIT:DICTSLIDERITEM & sxy & [-1,1,3,0.01] & sxy & float & 0
#@IVISIT:BUTTON & Clear & [Points,Clear] & clear
#@IVISIT:IMAGE & Data & 1.0 & [0,255] & im_data & int
#@IVISIT:TEXT_OUT & Report & [24,3] & just_left & report
";

/// Point set plus the parameters shared by every point-editing demo.
#[derive(Debug, Clone)]
pub(crate) struct Editor {
    pub points: Points,
    pub rng: ChaCha8Rng,
    seed: u64,
    pub n_new: usize,
    pub cov: Covariance,
    pub label: f64,
    pub clear: bool,
}

impl Editor {
    pub fn new(seed: u64) -> Self {
        Self {
            points: Points::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            n_new: 20,
            cov: Covariance::default(),
            label: 1.0,
            clear: false,
        }
    }

    pub fn registry(r: Registry) -> Registry {
        r.with_param("action", FieldShape::Scalar(ParamKind::String))
            .with_param("class", FieldShape::Scalar(ParamKind::String))
            .with_param("n_new", FieldShape::Scalar(ParamKind::Int))
            .with_param("cov", FieldShape::Group(["sxx", "syy", "sxy"].map(String::from).to_vec()))
            .with_param("clear", FieldShape::Scalar(ParamKind::String))
            .with_data("im_data", DataKind::Image)
            .with_data("report", DataKind::Text)
    }

    /// Returns false if `target` is not one of the shared parameters.
    pub fn set_param(&mut self, target: &ParamRef, value: &ParamValue) -> bool {
        match (target.name.as_str(), value) {
            ("class", ParamValue::Text(s)) => self.label = parse_label(s),
            ("n_new", v) => self.n_new = v.as_f64().unwrap_or(1.0).max(1.0) as usize,
            ("cov", ParamValue::Group(g)) => {
                for (k, n) in g.iter() {
                    self.cov.set(k, n.as_f64());
                }
            }
            ("clear", ParamValue::Text(s)) => self.clear = s == "1",
            ("action", _) => {}
            _ => return false,
        }
        true
    }

    pub fn reset(&mut self) {
        self.points.clear();
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
    }

    /// Consumes a pending Clear press.
    pub fn apply_clear(&mut self) {
        if std::mem::take(&mut self.clear) {
            self.points.clear();
        }
    }

    pub fn edit(&mut self, cmd: &ActionCommand) -> bool {
        self.points.edit(cmd, &mut self.rng, self.n_new, &self.cov, self.label)
    }

    pub fn counts(&self) -> String {
        format!(
            "N = {} (+1: {}, -1: {})",
            self.points.len(),
            self.points.count(1.0),
            self.points.count(-1.0)
        )
    }
}

/// Interactive generator of two-class training data.
#[derive(Debug, Clone)]
pub struct DataGen {
    editor: Editor,
    image: ImageBuffer<f64>,
    axis: AxisLayout,
}

impl DataGen {
    pub fn new(seed: u64) -> Self {
        let editor = Editor::new(seed);
        let (image, axis) = rasterize(&editor.points.figure("Data"));
        Self { editor, image, axis }
    }

    pub fn points(&self) -> &Points {
        &self.editor.points
    }

    fn redraw(&mut self) {
        (self.image, self.axis) = rasterize(&self.editor.points.figure("Data"));
    }
}

impl Simulation for DataGen {
    fn directives(&self) -> &'static str {
        DIRECTIVES
    }

    fn registry(&self) -> Registry {
        Editor::registry(Registry::default())
    }

    fn set_param(&mut self, target: &ParamRef, value: &ParamValue) {
        self.editor.set_param(target, value);
    }

    fn init(&mut self) {
        self.editor.reset();
        self.redraw();
    }

    fn step(&mut self) {
        self.editor.apply_clear();
        self.redraw();
    }

    fn data(&self, name: &str) -> Option<DataValue> {
        match name {
            "im_data" => Some(DataValue::Image(self.image.clone())),
            "report" => Some(DataValue::Text(self.editor.counts())),
            _ => None,
        }
    }

    fn handlers(&self) -> &'static [&'static str] {
        &["edit"]
    }

    fn bind(&mut self, binder: &mut Binder<'_>) -> Result<(), BindError> {
        binder.bind_automaton("Data", AutomatonConfig::new("action", EDIT_ACTIONS), "edit")
    }

    fn on_action(&mut self, handler: &str, cmd: &ActionCommand) {
        if handler == "edit" && self.editor.edit(cmd) {
            self.redraw();
        }
    }

    fn axis(&self, data: &str) -> Option<AxisLayout> {
        (data == "im_data").then_some(self.axis)
    }
}
