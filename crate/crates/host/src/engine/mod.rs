//! The engine: one hosted simulation, its widget collection and the
//! Init/Step/Run/Stop/Cont lifecycle. Everything here runs on a single
//! control loop; see [`runner`] for the threaded wrapper.

mod queue;
pub mod runner;
mod sim;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use workbench_core::automaton::{CoordinateMode, PointerEvent};
use workbench_core::directive::{merge_into_collection, parse_source, DirectiveRecord, MergeOptions, ParseError};
use workbench_core::model::{
    resolve_bindings, BindingTable, CommentWidgetDef, DataWidgetConfig, DataWidgetDef, Geometry, KeyedGroup,
    ModelError, ParamValue, ParamWidgetConfig, ParameterWidgetDef, Registry, WidgetCollection, WidgetTable,
    DEFAULT_CONTEXT,
};
use workbench_core::widget::{apply_param_widget, image_normalize, Applied, ButtonLatch, UiValue, WidgetError, WriteSlot};
use workbench_core::{ImageBuffer, Point};

use crate::store::{Store, StoreError};

pub use queue::{Input, InputQueue, DEFAULT_CAPACITY};
pub use sim::{AutomatonBinding, BindError, Binder, DataValue, RawBinding, Simulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Init,
    Step,
    Run,
    Stop,
    Cont,
    Parse,
    Save,
    Quit,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Init,
        Command::Step,
        Command::Run,
        Command::Stop,
        Command::Cont,
        Command::Parse,
        Command::Save,
        Command::Quit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Init => "init",
            Command::Step => "step",
            Command::Run => "run",
            Command::Stop => "stop",
            Command::Cont => "cont",
            Command::Parse => "parse",
            Command::Save => "save",
            Command::Quit => "quit",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| EngineError::BadCommand(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("not initialized")]
    NotInitialized,
    #[error("bad command `{0}`")]
    BadCommand(String),
    #[error("unknown widget id {0}")]
    UnknownWidget(u32),
    #[error("widget `{name}`: {source}")]
    Widget { name: String, source: WidgetError },
    #[error("parse failed: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("no store attached")]
    NoStore,
    #[error(transparent)]
    Bind(#[from] BindError),
}

impl EngineError {
    /// Short machine-readable code for wire error messages.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::NotInitialized => "not_initialized",
            EngineError::BadCommand(_) => "bad_command",
            EngineError::UnknownWidget(_) => "unknown_widget",
            EngineError::Widget { source, .. } => match source {
                WidgetError::TypeConversion { .. } => "type_conversion",
                WidgetError::EncodingLength { .. } | WidgetError::BadDigit(_) => "encoding_length",
                _ => "bad_value",
            },
            EngineError::Parse(_) => "parse_error",
            EngineError::Model(_) => "kind_conflict",
            EngineError::Store(StoreError::NoSuchContext(_)) => "no_such_context",
            EngineError::Store(_) => "store_error",
            EngineError::NoStore => "no_store",
            EngineError::Bind(_) => "bind_error",
        }
    }
}

/// Post-step snapshot of everything a client displays.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub step: u64,
    pub running: bool,
    pub texts: Vec<(u32, String)>,
    pub images: Vec<(u32, ImageBuffer<u8>)>,
    pub values: Vec<(u32, ParamValue)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidgetSlot {
    Param(usize),
    Data(usize),
    Comment(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WidgetEntry {
    Param {
        def: ParameterWidgetDef,
        value: Option<ParamValue>,
    },
    Data(DataWidgetDef),
    Comment(CommentWidgetDef),
}

impl WidgetEntry {
    pub fn name(&self) -> &str {
        match self {
            WidgetEntry::Param { def, .. } => &def.name,
            WidgetEntry::Data(def) => &def.name,
            WidgetEntry::Comment(def) => &def.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutWidget {
    pub id: u32,
    pub bound: bool,
    pub entry: WidgetEntry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub context: String,
    pub contexts: Vec<String>,
    pub step: u64,
    pub running: bool,
    pub widgets: Vec<LayoutWidget>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EngineEvent {
    Layout(Arc<Layout>),
    Frame(Arc<Frame>),
    Values { step: u64, values: Vec<(u32, ParamValue)> },
    Error { code: &'static str, detail: String },
    Report(String),
    Quit,
}

pub struct Engine {
    sim: Box<dyn Simulation>,
    registry: Registry,
    coll: WidgetCollection,
    bindings: BindingTable,
    latches: BTreeMap<String, ButtonLatch>,
    automata: Vec<AutomatonBinding>,
    raw: Vec<RawBinding>,
    queue: InputQueue,
    store: Option<Store>,
    step_count: u64,
    initialized: bool,
    running: bool,
    quit: bool,
    events: Vec<EngineEvent>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("context", &self.coll.context.name)
            .field("step_count", &self.step_count)
            .field("initialized", &self.initialized)
            .field("running", &self.running)
            .finish_non_exhaustive()
    }
}

impl Engine {
    /// Hosts `sim`. With a store, starts from the context the directives
    /// name if it was saved before, else from the default context.
    pub fn new(sim: Box<dyn Simulation>, store: Option<Store>) -> Result<Self, EngineError> {
        let registry = sim.registry();
        let mut coll = WidgetCollection::new(DEFAULT_CONTEXT);
        if let Some(store) = &store {
            let declared = parse_source(sim.directives())
                .ok()
                .and_then(|recs| declared_context(&recs).map(str::to_string));
            let name = match declared {
                Some(name) if store.has_context(&name)? => name,
                _ => DEFAULT_CONTEXT.to_string(),
            };
            coll = store.load_collection(&name)?;
        }
        let mut engine = Engine {
            sim,
            registry,
            coll: WidgetCollection::default(),
            bindings: BindingTable::default(),
            latches: BTreeMap::new(),
            automata: Vec::new(),
            raw: Vec::new(),
            queue: InputQueue::default(),
            store,
            step_count: 0,
            initialized: false,
            running: false,
            quit: false,
            events: Vec::new(),
        };
        engine.set_collection(coll);
        Ok(engine)
    }

    pub fn with_queue_capacity(mut self, capacity: usize) -> Self {
        self.queue = InputQueue::new(capacity);
        self
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn is_initialized(&self) -> bool {
        self.initialized
    }

    pub fn is_running(&self) -> bool {
        self.running
    }

    pub fn quit_requested(&self) -> bool {
        self.quit
    }

    pub fn collection(&self) -> &WidgetCollection {
        &self.coll
    }

    pub fn bindings(&self) -> &BindingTable {
        &self.bindings
    }

    pub fn store(&self) -> Option<&Store> {
        self.store.as_ref()
    }

    pub fn sim(&self) -> &dyn Simulation {
        self.sim.as_ref()
    }

    pub fn queue(&self) -> &InputQueue {
        &self.queue
    }

    pub fn delay_ms(&self) -> u64 {
        self.sim.delay_ms()
    }

    pub fn take_events(&mut self) -> Vec<EngineEvent> {
        std::mem::take(&mut self.events)
    }

    /// Records `err` as an outgoing error event.
    pub fn report_error(&mut self, err: &EngineError) {
        self.events.push(EngineEvent::Error {
            code: err.code(),
            detail: err.to_string(),
        });
    }

    /// Widget ids: parameter widgets first, then data widgets, then
    /// comments, each in collection order.
    pub fn slot(&self, id: u32) -> Option<WidgetSlot> {
        let i = id as usize;
        let (np, nd, nc) = (self.coll.pwidgets.len(), self.coll.dwidgets.len(), self.coll.comments.len());
        if i < np {
            Some(WidgetSlot::Param(i))
        } else if i < np + nd {
            Some(WidgetSlot::Data(i - np))
        } else if i < np + nd + nc {
            Some(WidgetSlot::Comment(i - np - nd))
        } else {
            None
        }
    }

    pub fn widget_id(&self, name: &str) -> Option<u32> {
        let np = self.coll.pwidgets.len();
        let nd = self.coll.dwidgets.len();
        if let Some(i) = self.coll.pwidgets.iter().position(|w| w.name == name) {
            return Some(i as u32);
        }
        if let Some(i) = self.coll.dwidgets.iter().position(|w| w.name == name) {
            return Some((np + i) as u32);
        }
        self.coll.comments.iter().position(|w| w.name == name).map(|i| (np + nd + i) as u32)
    }

    /// Replaces the collection, re-resolves bindings and pushes every bound
    /// value into the simulation.
    pub fn set_collection(&mut self, coll: WidgetCollection) {
        self.coll = coll;
        self.bindings = resolve_bindings(&self.coll, &self.registry);
        self.latches = self
            .coll
            .pwidgets
            .iter()
            .filter(|w| matches!(w.config, ParamWidgetConfig::Button(_)))
            .map(|w| (w.name.clone(), ButtonLatch::default()))
            .collect();
        for i in 0..self.coll.pwidgets.len() {
            self.push_param(i);
        }
        if self.initialized {
            if let Err(e) = self.rebind() {
                self.report_error(&e);
            }
        }
    }

    fn push_param(&mut self, i: usize) {
        let w = &self.coll.pwidgets[i];
        if !self.bindings.is_bound(WidgetTable::Parameter, &w.name) {
            return;
        }
        if let Some(p) = self.coll.param(&w.target) {
            self.sim.set_param(&w.target, &p.value);
        }
    }

    fn rebind(&mut self) -> Result<(), EngineError> {
        let mut binder = Binder::new(&self.coll, self.sim.handlers());
        let result = self.sim.bind(&mut binder);
        self.automata = binder.automata;
        self.raw = binder.raw;
        result.map_err(EngineError::from)
    }

    pub fn control(&mut self, cmd: Command) -> Result<(), EngineError> {
        match cmd {
            Command::Init => {
                self.running = false;
                for i in 0..self.coll.pwidgets.len() {
                    self.push_param(i);
                }
                self.sim.init();
                self.step_count = 0;
                self.initialized = true;
                let bound = self.rebind();
                self.publish_frame();
                bound?;
            }
            Command::Step => {
                self.require_init()?;
                self.running = false;
                self.do_step();
                self.publish_frame();
            }
            Command::Run | Command::Cont => {
                self.require_init()?;
                self.running = true;
                self.publish_frame();
            }
            Command::Stop => {
                self.running = false;
                self.apply_pending();
                self.publish_frame();
            }
            Command::Parse => self.parse()?,
            Command::Save => {
                let store = self.store.as_mut().ok_or(EngineError::NoStore)?;
                store.save_collection(&self.coll)?;
                self.events.push(EngineEvent::Report(format!("saved context `{}`", self.coll.context.name)));
                self.publish_layout();
            }
            Command::Quit => {
                self.running = false;
                self.quit = true;
                self.publish_frame();
                self.events.push(EngineEvent::Quit);
            }
        }
        Ok(())
    }

    fn require_init(&self) -> Result<(), EngineError> {
        if self.initialized {
            Ok(())
        } else {
            Err(EngineError::NotInitialized)
        }
    }

    fn parse(&mut self) -> Result<(), EngineError> {
        let records = parse_source(self.sim.directives())?;
        let mut base = self.coll.clone();
        if let (Some(name), Some(store)) = (declared_context(&records), &self.store) {
            if name != base.context.name && store.has_context(name)? {
                base = store.load_collection(name)?;
            }
        }
        let (coll, report) = merge_into_collection(&records, &base, MergeOptions::default())?;
        self.set_collection(coll);
        let mut text = format!(
            "parsed context `{}`: {} created, {} updated, {} unchanged",
            self.coll.context.name, report.created, report.updated, report.unchanged
        );
        for (w, field, problem) in self.bindings.unresolved() {
            text.push_str(&format!("\nunresolved: {} -> {}: {}", w.name, field, problem));
        }
        self.events.push(EngineEvent::Report(text));
        self.publish_layout();
        Ok(())
    }

    /// Loads a stored context and makes it the active collection.
    pub fn select_context(&mut self, name: &str) -> Result<(), EngineError> {
        let store = self.store.as_ref().ok_or(EngineError::NoStore)?;
        let coll = store.load_collection(name)?;
        self.set_collection(coll);
        self.publish_layout();
        Ok(())
    }

    /// Copies the active context's stored rows to a new context.
    pub fn copy_context(&mut self, dst: &str) -> Result<(), EngineError> {
        let src = self.coll.context.name.clone();
        let store = self.store.as_mut().ok_or(EngineError::NoStore)?;
        store.copy_context(&src, dst)?;
        self.publish_layout();
        Ok(())
    }

    /// Enqueues an input for the next step boundary.
    pub fn queue_input(&mut self, input: Input) {
        self.queue.push(input);
    }

    /// Applies every queued input now. Errors are reported as events.
    pub fn apply_pending(&mut self) {
        if self.queue.is_empty() {
            return;
        }
        let inputs: Vec<Input> = self.queue.drain().collect();
        let (mut values_changed, mut layout_changed, mut pointed) = (false, false, false);
        for input in inputs {
            let result = match input {
                Input::Param { widget_id, value } => {
                    values_changed = true;
                    self.apply_param(widget_id, &value)
                }
                Input::Pointer { widget_id, event } => {
                    pointed = true;
                    self.dispatch_pointer(widget_id, event)
                }
                Input::Geometry { widget_id, x, y } => {
                    layout_changed = true;
                    self.set_geometry(widget_id, x, y)
                }
            };
            if let Err(e) = result {
                self.report_error(&e);
            }
        }
        if !self.running {
            if layout_changed {
                self.publish_layout();
            } else if values_changed {
                self.events.push(EngineEvent::Values {
                    step: self.step_count,
                    values: self.values(),
                });
            }
            if pointed && self.initialized {
                self.publish_frame();
            }
        }
    }

    fn apply_param(&mut self, id: u32, ui: &UiValue) -> Result<(), EngineError> {
        let Some(WidgetSlot::Param(i)) = self.slot(id) else {
            return Err(EngineError::UnknownWidget(id));
        };
        let def = &self.coll.pwidgets[i];
        let ui = match def.config {
            ParamWidgetConfig::Button(_) => UiValue::Click,
            _ => ui.clone(),
        };
        let applied = apply_param_widget(def, &ui).map_err(|source| EngineError::Widget {
            name: def.name.clone(),
            source,
        })?;
        match applied {
            Applied::Pulse(_) => {
                let name = def.name.clone();
                self.latches.entry(name).or_default().click();
            }
            Applied::Write(w) => {
                if let Some(p) = self.coll.param_mut(&w.target) {
                    match (w.slot, &mut p.value) {
                        (WriteSlot::Whole, v) => *v = w.value,
                        (WriteSlot::Key(k), ParamValue::Group(g)) => {
                            if let Some(n) = number_of(&w.value) {
                                g.insert(k, n);
                            }
                        }
                        (WriteSlot::Key(k), v) => {
                            let mut g = KeyedGroup::new();
                            if let Some(n) = number_of(&w.value) {
                                g.insert(k, n);
                            }
                            *v = ParamValue::Group(g);
                        }
                    }
                }
                // every widget sharing the target sees the write
                for j in 0..self.coll.pwidgets.len() {
                    if self.coll.pwidgets[j].target == w.target {
                        self.push_param(j);
                    }
                }
            }
        }
        Ok(())
    }

    fn set_geometry(&mut self, id: u32, x: i32, y: i32) -> Result<(), EngineError> {
        let g = Geometry::new(x, y);
        match self.slot(id).ok_or(EngineError::UnknownWidget(id))? {
            WidgetSlot::Param(i) => self.coll.pwidgets[i].geometry = g,
            WidgetSlot::Data(i) => self.coll.dwidgets[i].geometry = g,
            WidgetSlot::Comment(i) => self.coll.comments[i].geometry = g,
        }
        Ok(())
    }

    fn to_coords(sim: &dyn Simulation, mode: CoordinateMode, data_field: &str, pos: Point) -> Point {
        match (mode, sim.axis(data_field)) {
            (CoordinateMode::Data, Some(axis)) => axis.data_from_pixel(pos.x, pos.y),
            _ => pos,
        }
    }

    fn dispatch_pointer(&mut self, id: u32, event: PointerEvent) -> Result<(), EngineError> {
        let name = match self.slot(id) {
            Some(WidgetSlot::Data(i)) => self.coll.dwidgets[i].name.clone(),
            Some(_) => return Ok(()),
            None => return Err(EngineError::UnknownWidget(id)),
        };
        let sim = self.sim.as_ref();
        let mut raw_calls = Vec::new();
        for b in self.raw.iter().filter(|b| b.widget == name && b.phases.contains(&event.kind)) {
            if event.button == 1 {
                let pos = Self::to_coords(sim, b.mode, &b.data_field, event.pos);
                raw_calls.push((b.handler.clone(), event.kind, pos));
            }
        }
        let mut action_calls = Vec::new();
        for b in self.automata.iter_mut().filter(|b| b.widget == name) {
            let active = self
                .coll
                .param(&workbench_core::model::ParamRef::scalar(b.automaton.config.action_param.clone()))
                .and_then(|p| p.value.as_text())
                .unwrap_or("")
                .to_string();
            let mut evt = event;
            evt.pos = Self::to_coords(sim, b.automaton.config.coordinate_mode, &b.data_field, event.pos);
            if let Some(cmd) = b.automaton.feed(&active, &evt) {
                action_calls.push((b.handler.clone(), cmd));
            }
        }
        for (handler, kind, pos) in raw_calls {
            self.sim.on_raw(&handler, kind, pos);
        }
        for (handler, cmd) in action_calls {
            self.sim.on_action(&handler, &cmd);
        }
        Ok(())
    }

    /// One step: queued inputs, then button pulses, then the simulation.
    fn do_step(&mut self) {
        self.apply_pending();
        for i in 0..self.coll.pwidgets.len() {
            let w = &self.coll.pwidgets[i];
            if !matches!(w.config, ParamWidgetConfig::Button(_)) {
                continue;
            }
            let bit = self.latches.entry(w.name.clone()).or_default().read_and_reset();
            let target = w.target.clone();
            if let Some(p) = self.coll.param_mut(&target) {
                p.value = ParamValue::Text(bit.to_string());
            }
            self.push_param(i);
        }
        self.sim.step();
        self.step_count += 1;
    }

    /// One step of a run; publishes a frame on every `frame_every`-th step.
    pub fn run_step(&mut self) {
        if !self.running {
            return;
        }
        self.do_step();
        let every = self.sim.frame_every().max(1);
        if self.step_count % every == 0 {
            self.publish_frame();
        }
    }

    pub fn values(&self) -> Vec<(u32, ParamValue)> {
        self.coll
            .pwidgets
            .iter()
            .enumerate()
            .filter_map(|(i, w)| self.coll.param(&w.target).map(|p| (i as u32, p.value.clone())))
            .collect()
    }

    /// Deep copy of every bound data field plus the step counter.
    pub fn snapshot(&self) -> Frame {
        let np = self.coll.pwidgets.len() as u32;
        let mut texts = Vec::new();
        let mut images = Vec::new();
        for (i, w) in self.coll.dwidgets.iter().enumerate() {
            if !self.bindings.is_bound(WidgetTable::Data, &w.name) {
                continue;
            }
            let id = np + i as u32;
            match (&w.config, self.sim.data(&w.target)) {
                (DataWidgetConfig::TextOut(_), Some(DataValue::Text(t))) => texts.push((id, t)),
                (DataWidgetConfig::Image(cfg), Some(DataValue::Image(buf))) => {
                    if let Ok(img) = image_normalize(&buf, cfg.lo, cfg.hi) {
                        images.push((id, img));
                    }
                }
                _ => {}
            }
        }
        Frame {
            step: self.step_count,
            running: self.running,
            texts,
            images,
            values: self.values(),
        }
    }

    pub fn publish_frame(&mut self) {
        let frame = self.snapshot();
        self.events.push(EngineEvent::Frame(Arc::new(frame)));
    }

    pub fn layout(&self) -> Layout {
        let mut widgets = Vec::new();
        let mut id = 0u32;
        for w in &self.coll.pwidgets {
            widgets.push(LayoutWidget {
                id,
                bound: self.bindings.is_bound(WidgetTable::Parameter, &w.name),
                entry: WidgetEntry::Param {
                    def: w.clone(),
                    value: self.coll.param(&w.target).map(|p| p.value.clone()),
                },
            });
            id += 1;
        }
        for w in &self.coll.dwidgets {
            widgets.push(LayoutWidget {
                id,
                bound: self.bindings.is_bound(WidgetTable::Data, &w.name),
                entry: WidgetEntry::Data(w.clone()),
            });
            id += 1;
        }
        for c in &self.coll.comments {
            widgets.push(LayoutWidget {
                id,
                bound: true,
                entry: WidgetEntry::Comment(c.clone()),
            });
            id += 1;
        }
        let contexts = self
            .store
            .as_ref()
            .and_then(|s| s.list_contexts().ok())
            .unwrap_or_else(|| vec![self.coll.context.name.clone()]);
        Layout {
            context: self.coll.context.name.clone(),
            contexts,
            step: self.step_count,
            running: self.running,
            widgets,
        }
    }

    pub fn publish_layout(&mut self) {
        let layout = self.layout();
        self.events.push(EngineEvent::Layout(Arc::new(layout)));
    }

    /// Text outputs of the current state, keyed by widget name.
    pub fn texts(&self) -> Vec<(String, String)> {
        let np = self.coll.pwidgets.len();
        self.snapshot()
            .texts
            .into_iter()
            .map(|(id, t)| (self.coll.dwidgets[id as usize - np].name.clone(), t))
            .collect()
    }
}

fn number_of(v: &ParamValue) -> Option<workbench_core::model::Number> {
    match v {
        ParamValue::Int(i) => Some(workbench_core::model::Number::Int(*i)),
        ParamValue::Real(r) => Some(workbench_core::model::Number::Real(*r)),
        _ => None,
    }
}

fn declared_context(records: &[DirectiveRecord]) -> Option<&str> {
    records.iter().find_map(|r| match r {
        DirectiveRecord::Context(name) => Some(name.as_str()),
        _ => None,
    })
}
