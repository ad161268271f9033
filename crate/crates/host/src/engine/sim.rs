use workbench_core::automaton::{ActionCommand, Automaton, AutomatonConfig, CoordinateMode, PointerKind};
use workbench_core::model::{DataWidgetKind, ParamRef, ParamValue, Registry, WidgetCollection};
use workbench_core::render::AxisLayout;
use workbench_core::{ImageBuffer, Point};

/// Output value of one data field.
#[derive(Debug, Clone, PartialEq)]
pub enum DataValue {
    Text(String),
    /// Raw samples; the image widget's `[lo, hi]` maps them to 0..255.
    Image(ImageBuffer<f64>),
}

/// A step simulation hosted by the engine.
///
/// All methods run on the engine's control loop, one at a time.
pub trait Simulation: Send {
    /// The `#@IVISIT:` block declaring this simulation's widgets.
    fn directives(&self) -> &'static str;

    /// Parameter and data fields widgets may bind to.
    fn registry(&self) -> Registry;

    /// Writes a bound parameter. Only called with values whose kind matches
    /// the registry entry for `target`.
    fn set_param(&mut self, target: &ParamRef, value: &ParamValue);

    fn init(&mut self);

    fn step(&mut self);

    fn data(&self, name: &str) -> Option<DataValue>;

    /// Handler names accepted by [`Binder`].
    fn handlers(&self) -> &'static [&'static str] {
        &[]
    }

    /// Called after every init, once the layout is known.
    fn bind(&mut self, _binder: &mut Binder<'_>) -> Result<(), BindError> {
        Ok(())
    }

    fn on_action(&mut self, _handler: &str, _cmd: &ActionCommand) {}

    fn on_raw(&mut self, _handler: &str, _kind: PointerKind, _pos: Point) {}

    /// Pixel/data transform of an image data field, if it has one.
    fn axis(&self, _data: &str) -> Option<AxisLayout> {
        None
    }

    /// Publish a frame during `run` only every k-th step.
    fn frame_every(&self) -> u64 {
        1
    }

    /// Minimum time between step starts while running.
    fn delay_ms(&self) -> u64 {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BindError {
    #[error("bind error: unknown widget `{0}`")]
    UnknownWidget(String),
    #[error("bind error: `{0}` is not an image widget")]
    NotAnImage(String),
    #[error("bind error: unknown handler `{0}`")]
    UnknownHandler(String),
}

#[derive(Debug, Clone)]
pub struct AutomatonBinding {
    pub widget: String,
    pub data_field: String,
    pub handler: String,
    pub automaton: Automaton,
}

#[derive(Debug, Clone)]
pub struct RawBinding {
    pub widget: String,
    pub data_field: String,
    pub handler: String,
    pub phases: Vec<PointerKind>,
    pub mode: CoordinateMode,
}

/// Collects pointer bindings during [`Simulation::bind`].
pub struct Binder<'a> {
    coll: &'a WidgetCollection,
    handlers: &'static [&'static str],
    pub(crate) automata: Vec<AutomatonBinding>,
    pub(crate) raw: Vec<RawBinding>,
}

impl<'a> Binder<'a> {
    pub(crate) fn new(coll: &'a WidgetCollection, handlers: &'static [&'static str]) -> Self {
        Self {
            coll,
            handlers,
            automata: Vec::new(),
            raw: Vec::new(),
        }
    }

    fn check(&self, widget: &str, handler: &str) -> Result<String, BindError> {
        let w = self
            .coll
            .dwidget(widget)
            .ok_or_else(|| BindError::UnknownWidget(widget.to_string()))?;
        if w.kind() != DataWidgetKind::Image {
            return Err(BindError::NotAnImage(widget.to_string()));
        }
        if !self.handlers.contains(&handler) {
            return Err(BindError::UnknownHandler(handler.to_string()));
        }
        Ok(w.target.clone())
    }

    /// Feeds pointer events on `image_widget` through a click/drag automaton
    /// and delivers its commands to `handler`.
    pub fn bind_automaton(&mut self, image_widget: &str, config: AutomatonConfig, handler: &str) -> Result<(), BindError> {
        let data_field = self.check(image_widget, handler)?;
        self.automata.push(AutomatonBinding {
            widget: image_widget.to_string(),
            data_field,
            handler: handler.to_string(),
            automaton: Automaton::new(config),
        });
        Ok(())
    }

    /// Delivers the given raw pointer phases on `image_widget` to `handler`.
    pub fn bind_raw(
        &mut self,
        image_widget: &str,
        handler: &str,
        phases: &[PointerKind],
        mode: CoordinateMode,
    ) -> Result<(), BindError> {
        let data_field = self.check(image_widget, handler)?;
        self.raw.push(RawBinding {
            widget: image_widget.to_string(),
            data_field,
            handler: handler.to_string(),
            phases: phases.to_vec(),
            mode,
        });
        Ok(())
    }
}
