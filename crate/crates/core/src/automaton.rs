//! Two-state click/drag automaton turning raw pointer events into action
//! commands.
//!
//! ```text
//!            press (click action) / click
//!           +----+
//!           v    |
//!         IDLE --+-- press (drag action) / drag_init --> DRAG
//!           ^                                            |  ^
//!           +---------- release / drag_finish -----------+  | move / drag_move
//!                                                           +--
//! ```

use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointerKind {
    Press,
    Move,
    Release,
}

impl PointerKind {
    pub const ALL: [PointerKind; 3] = [PointerKind::Press, PointerKind::Move, PointerKind::Release];

    pub fn as_str(self) -> &'static str {
        match self {
            PointerKind::Press => "press",
            PointerKind::Move => "move",
            PointerKind::Release => "release",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerEvent {
    pub kind: PointerKind,
    pub button: u8,
    pub pos: Point,
}

impl PointerEvent {
    pub fn new(kind: PointerKind, button: u8, x: f64, y: f64) -> Self {
        Self {
            kind,
            button,
            pos: Point::new(x, y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionType {
    Click,
    Drag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordinateMode {
    Pixel,
    #[default]
    Data,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutomatonConfig {
    /// Text parameter holding the active action name.
    pub action_param: String,
    pub action_types: BTreeMap<String, ActionType>,
    pub button_no: u8,
    pub coordinate_mode: CoordinateMode,
}

impl AutomatonConfig {
    pub fn new<I, S>(action_param: impl Into<String>, actions: I) -> Self
    where
        I: IntoIterator<Item = (S, ActionType)>,
        S: Into<String>,
    {
        Self {
            action_param: action_param.into(),
            action_types: actions.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            button_no: 1,
            coordinate_mode: CoordinateMode::Data,
        }
    }

    pub fn with_button(mut self, button_no: u8) -> Self {
        self.button_no = button_no;
        self
    }

    pub fn with_mode(mut self, mode: CoordinateMode) -> Self {
        self.coordinate_mode = mode;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum AutomatonState {
    #[default]
    Idle,
    Drag {
        /// Action the drag started under; kept until release.
        action: String,
        pos_init: Point,
        pos_prev: Point,
    },
}

impl AutomatonState {
    pub fn tag(&self) -> StateTag {
        match self {
            AutomatonState::Idle => StateTag::Idle,
            AutomatonState::Drag { .. } => StateTag::Drag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateTag {
    Idle,
    Drag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Click,
    DragInit,
    DragMove,
    DragFinish,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Click => "click",
            Phase::DragInit => "drag_init",
            Phase::DragMove => "drag_move",
            Phase::DragFinish => "drag_finish",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionCommand {
    pub action: String,
    pub phase: Phase,
    pub pos: Point,
    pub pos_init: Point,
    pub pos_prev: Point,
}

/// The transition table. `action` is the type of the currently selected
/// action; it only matters in IDLE.
pub fn transition(state: StateTag, kind: PointerKind, action: ActionType) -> (StateTag, Option<Phase>) {
    match (state, kind, action) {
        (StateTag::Idle, PointerKind::Press, ActionType::Click) => (StateTag::Idle, Some(Phase::Click)),
        (StateTag::Idle, PointerKind::Press, ActionType::Drag) => (StateTag::Drag, Some(Phase::DragInit)),
        (StateTag::Drag, PointerKind::Move, _) => (StateTag::Drag, Some(Phase::DragMove)),
        (StateTag::Drag, PointerKind::Release, _) => (StateTag::Idle, Some(Phase::DragFinish)),
        (s, _, _) => (s, None),
    }
}

/// One automaton step. Events from other buttons and presses under an
/// unknown action are ignored.
pub fn feed(
    state: &AutomatonState,
    config: &AutomatonConfig,
    active_action: &str,
    evt: &PointerEvent,
) -> (AutomatonState, Option<ActionCommand>) {
    if evt.button != config.button_no {
        return (state.clone(), None);
    }
    let pos = evt.pos;
    match state {
        AutomatonState::Idle => {
            let Some(&ty) = config.action_types.get(active_action) else {
                return (state.clone(), None);
            };
            let (next, phase) = transition(StateTag::Idle, evt.kind, ty);
            let Some(phase) = phase else {
                return (state.clone(), None);
            };
            let cmd = ActionCommand {
                action: active_action.into(),
                phase,
                pos,
                pos_init: pos,
                pos_prev: pos,
            };
            let next = match next {
                StateTag::Idle => AutomatonState::Idle,
                StateTag::Drag => AutomatonState::Drag {
                    action: active_action.into(),
                    pos_init: pos,
                    pos_prev: pos,
                },
            };
            (next, Some(cmd))
        }
        AutomatonState::Drag {
            action,
            pos_init,
            pos_prev,
        } => {
            let (next, phase) = transition(StateTag::Drag, evt.kind, ActionType::Drag);
            let Some(phase) = phase else {
                return (state.clone(), None);
            };
            let cmd = ActionCommand {
                action: action.clone(),
                phase,
                pos,
                pos_init: *pos_init,
                pos_prev: *pos_prev,
            };
            let next = match next {
                StateTag::Idle => AutomatonState::Idle,
                StateTag::Drag => AutomatonState::Drag {
                    action: action.clone(),
                    pos_init: *pos_init,
                    pos_prev: pos,
                },
            };
            (next, Some(cmd))
        }
    }
}

/// Owned automaton: configuration plus current state.
#[derive(Debug, Clone, PartialEq)]
pub struct Automaton {
    pub config: AutomatonConfig,
    state: AutomatonState,
}

impl Automaton {
    pub fn new(config: AutomatonConfig) -> Self {
        Self {
            config,
            state: AutomatonState::Idle,
        }
    }

    pub fn state(&self) -> &AutomatonState {
        &self.state
    }

    pub fn reset(&mut self) {
        self.state = AutomatonState::Idle;
    }

    pub fn feed(&mut self, active_action: &str, evt: &PointerEvent) -> Option<ActionCommand> {
        let (next, cmd) = feed(&self.state, &self.config, active_action, evt);
        self.state = next;
        cmd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn config() -> AutomatonConfig {
        AutomatonConfig::new(
            "action",
            [
                ("Test", ActionType::Click),
                ("New", ActionType::Click),
                ("Delete", ActionType::Click),
                ("Move", ActionType::Drag),
            ],
        )
    }

    #[test]
    fn click_action_stays_idle() {
        let mut a = Automaton::new(config());
        let cmd = a.feed("Delete", &PointerEvent::new(PointerKind::Press, 1, 1.0, 2.0)).unwrap();
        assert_eq!(cmd.phase, Phase::Click);
        assert_eq!(*a.state(), AutomatonState::Idle);
    }

    #[test]
    fn drag_bracket() {
        let mut a = Automaton::new(config());
        let c0 = a.feed("Move", &PointerEvent::new(PointerKind::Press, 1, 0.0, 0.0)).unwrap();
        assert_eq!(c0.phase, Phase::DragInit);
        assert_eq!(a.state().tag(), StateTag::Drag);
        // action switch mid-drag does not change the running drag
        let c1 = a.feed("Delete", &PointerEvent::new(PointerKind::Move, 1, 1.0, 0.0)).unwrap();
        assert_eq!((c1.phase, c1.action.as_str()), (Phase::DragMove, "Move"));
        let c2 = a.feed("Delete", &PointerEvent::new(PointerKind::Move, 1, 2.0, 0.0)).unwrap();
        assert_eq!(c2.pos_prev, Point::new(1.0, 0.0));
        assert_eq!(c2.pos_init, Point::new(0.0, 0.0));
        let c3 = a.feed("Delete", &PointerEvent::new(PointerKind::Release, 1, 3.0, 0.0)).unwrap();
        assert_eq!(c3.phase, Phase::DragFinish);
        assert_eq!(*a.state(), AutomatonState::Idle);
    }

    #[test]
    fn ignored_inputs() {
        let mut a = Automaton::new(config());
        assert!(a.feed("Move", &PointerEvent::new(PointerKind::Move, 1, 0.0, 0.0)).is_none());
        assert!(a.feed("Move", &PointerEvent::new(PointerKind::Press, 3, 0.0, 0.0)).is_none());
        assert!(a.feed("Bogus", &PointerEvent::new(PointerKind::Press, 1, 0.0, 0.0)).is_none());
        a.feed("Move", &PointerEvent::new(PointerKind::Press, 1, 0.0, 0.0)).unwrap();
        assert!(a.feed("Move", &PointerEvent::new(PointerKind::Press, 1, 0.0, 0.0)).is_none());
        assert!(a.feed("Move", &PointerEvent::new(PointerKind::Release, 2, 0.0, 0.0)).is_none());
        assert_eq!(a.state().tag(), StateTag::Drag);
    }

    #[test]
    fn exactly_four_emitting_rows() {
        let mut emitting = Vec::new();
        for s in [StateTag::Idle, StateTag::Drag] {
            for k in PointerKind::ALL {
                for t in [ActionType::Click, ActionType::Drag] {
                    if let (next, Some(p)) = transition(s, k, t) {
                        emitting.push((s, k, next, p));
                    }
                }
            }
        }
        emitting.dedup_by(|a, b| a == b);
        assert_eq!(
            emitting,
            [
                (StateTag::Idle, PointerKind::Press, StateTag::Idle, Phase::Click),
                (StateTag::Idle, PointerKind::Press, StateTag::Drag, Phase::DragInit),
                (StateTag::Drag, PointerKind::Move, StateTag::Drag, Phase::DragMove),
                (StateTag::Drag, PointerKind::Release, StateTag::Idle, Phase::DragFinish),
            ]
        );
    }
}
