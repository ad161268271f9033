use workbench_core::automaton::{ActionCommand, ActionType, AutomatonConfig, Phase};
use workbench_core::model::{FieldShape, ParamKind, ParamRef, ParamValue, Registry};
use workbench_core::numerics::classify::{
    count_errors, fit_kernel_mlp, fit_least_squares, ClassifierModel, ClassifyError, KernelKind,
};
use workbench_core::render::{contour_zero, AxisLayout, Grid, Marker, BLACK};
use workbench_core::{ImageBuffer, Point};

use super::datagen::Editor;
use super::points::{rasterize, EDIT_ACTIONS};
use crate::engine::{BindError, Binder, DataValue, Simulation};

const DIRECTIVES: &str = "\
#@IVISIT:SIMULATION & classifiers
#@IVISIT:RADIOBUTTON & Action & [New,Delete,Move,Test] & action & New
#@IVISIT:RADIOBUTTON & Class & [+1,-1] & class & +1
#@IVISIT:SLIDER & N & [200,1] & [1,100,3,1] & n_new & -1 & int & 20
#@IVISIT:DICTSLIDER & Covariance & [200,20,-1,1,10] & cov & 0
#@IVISIT:DICTSLIDERITEM & sxx & [0.01,1,3,0.01] & sxx & float & 0.1
#@IVISIT:DICTSLIDERITEM & syy & [0.01,1,3,0.01] & syy & float & 0.1
#@IVISIT:DICTSLIDERITEM & sxy & [-1,1,3,0.01] & sxy & float & 0
#@IVISIT:BUTTON & Clear & [Points,Clear] & clear
#@IVISIT:LISTSEL & Model & [16,2] & [least_squares,kernel_mlp] & model & -1 & string & least_squares
#@IVISIT:RADIOBUTTON & Kernel & [linear,tanh,gauss] & kernel & linear
#@IVISIT:SLIDER & sigma & [200,1] & [0.1,5,3,0.1] & sigma & -1 & float & 1
#@IVISIT:SLIDER & log10 lambda & [200,1] & [-8,2,3,0.1] & log_lmbda & -1 & float & -3
#@IVISIT:IMAGE & Data & 1.0 & [0,255] & im_data & int
#@IVISIT:TEXT_OUT & Report & [32,4] & just_left & report
";

/// Samples per axis of the grid the decision boundary is traced on.
pub const GRID_NODES: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LeastSquares,
    KernelMlp,
}

/// Least-squares and kernel classifiers trained on an editable point set.
#[derive(Debug, Clone)]
pub struct Classifiers {
    editor: Editor,
    model_kind: ModelKind,
    kernel: KernelKind,
    sigma: f64,
    log_lambda: f64,
    fit: Option<Result<ClassifierModel, ClassifyError>>,
    test: Option<(Point, f64)>,
    image: ImageBuffer<f64>,
    axis: AxisLayout,
}

impl Classifiers {
    pub fn new(seed: u64) -> Self {
        let editor = Editor::new(seed);
        let (image, axis) = rasterize(&editor.points.figure("Classifier"));
        let mut s = Self {
            editor,
            model_kind: ModelKind::LeastSquares,
            kernel: KernelKind::Linear,
            sigma: 1.0,
            log_lambda: -3.0,
            fit: None,
            test: None,
            image,
            axis,
        };
        s.refit();
        s
    }

    pub fn lambda(&self) -> f64 {
        10f64.powf(self.log_lambda)
    }

    pub fn model(&self) -> Option<&ClassifierModel> {
        self.fit.as_ref().and_then(|r| r.as_ref().ok())
    }

    pub fn editor_points(&self) -> &super::points::Points {
        &self.editor.points
    }

    fn refit(&mut self) {
        let pts = &self.editor.points;
        self.fit = if pts.is_empty() {
            None
        } else {
            Some(match self.model_kind {
                ModelKind::LeastSquares => fit_least_squares(&pts.x, &pts.t, self.lambda()),
                ModelKind::KernelMlp => fit_kernel_mlp(&pts.x, &pts.t, self.kernel, self.sigma, self.lambda()),
            })
        };
        self.redraw();
    }

    fn redraw(&mut self) {
        let mut fig = self.editor.points.figure("Classifier");
        if let Some(model) = self.model() {
            let axis = *fig.axis();
            if let Ok(grid) = Grid::sample(GRID_NODES, GRID_NODES, &axis, |x, y| model.discriminant(&[x, y])) {
                for line in contour_zero(&grid, &axis) {
                    fig.plot_polyline(line, BLACK);
                }
            }
        }
        if let Some((p, _)) = self.test {
            let _ = fig.plot_scatter(&[p.x], &[p.y], Marker::Square, BLACK);
        }
        (self.image, self.axis) = rasterize(&fig);
    }

    fn report(&self) -> String {
        let mut lines = vec![self.editor.counts()];
        lines.push(match (&self.fit, self.model_kind) {
            (None, _) => "no data".to_string(),
            (Some(Err(e)), _) => e.to_string(),
            (Some(Ok(m)), ModelKind::LeastSquares) => {
                format!("least squares: {} errors", count_errors(m, &self.editor.points.x, &self.editor.points.t))
            }
            (Some(Ok(m)), ModelKind::KernelMlp) => format!(
                "kernel mlp ({}): {} errors",
                self.kernel,
                count_errors(m, &self.editor.points.x, &self.editor.points.t)
            ),
        });
        lines.push(format!("lambda = {:.3e}", self.lambda()));
        if let Some((p, class)) = self.test {
            lines.push(format!("test ({:.2}, {:.2}) -> {:+}", p.x, p.y, class));
        }
        lines.join("\n")
    }
}

impl Simulation for Classifiers {
    fn directives(&self) -> &'static str {
        DIRECTIVES
    }

    fn registry(&self) -> Registry {
        Editor::registry(Registry::default())
            .with_param("model", FieldShape::Scalar(ParamKind::String))
            .with_param("kernel", FieldShape::Scalar(ParamKind::String))
            .with_param("sigma", FieldShape::Scalar(ParamKind::Float))
            .with_param("log_lmbda", FieldShape::Scalar(ParamKind::Float))
    }

    fn set_param(&mut self, target: &ParamRef, value: &ParamValue) {
        if self.editor.set_param(target, value) {
            return;
        }
        match (target.name.as_str(), value) {
            ("model", ParamValue::Text(s)) => {
                self.model_kind = if s == "kernel_mlp" {
                    ModelKind::KernelMlp
                } else {
                    ModelKind::LeastSquares
                }
            }
            ("kernel", ParamValue::Text(s)) => self.kernel = s.parse().unwrap_or_default(),
            ("sigma", v) => self.sigma = v.as_f64().unwrap_or(1.0),
            ("log_lmbda", v) => self.log_lambda = v.as_f64().unwrap_or(-3.0),
            _ => {}
        }
    }

    fn init(&mut self) {
        self.editor.reset();
        self.test = None;
        self.refit();
    }

    fn step(&mut self) {
        self.editor.apply_clear();
        self.refit();
    }

    fn data(&self, name: &str) -> Option<DataValue> {
        match name {
            "im_data" => Some(DataValue::Image(self.image.clone())),
            "report" => Some(DataValue::Text(self.report())),
            _ => None,
        }
    }

    fn handlers(&self) -> &'static [&'static str] {
        &["edit"]
    }

    fn bind(&mut self, binder: &mut Binder<'_>) -> Result<(), BindError> {
        let actions = EDIT_ACTIONS.into_iter().chain([("Test", ActionType::Click)]);
        binder.bind_automaton("Data", AutomatonConfig::new("action", actions), "edit")
    }

    fn on_action(&mut self, handler: &str, cmd: &ActionCommand) {
        if handler != "edit" {
            return;
        }
        if cmd.action == "Test" && cmd.phase == Phase::Click {
            if let Some(class) = self.model().map(|m| m.classify(&[cmd.pos.x, cmd.pos.y])) {
                self.test = Some((cmd.pos, class));
                self.redraw();
            }
        } else if self.editor.edit(cmd) {
            self.refit();
        }
    }

    fn axis(&self, data: &str) -> Option<AxisLayout> {
        (data == "im_data").then_some(self.axis)
    }
}
