use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use workbench_core::automaton::*;
use workbench_core::Point;

#[test]
fn exactly_four_emitting_transitions() {
    let mut emitting = Vec::new();
    for state in [StateTag::Idle, StateTag::Drag] {
        for kind in PointerKind::ALL {
            for action in [ActionType::Click, ActionType::Drag] {
                let (next, phase) = transition(state, kind, action);
                if let Some(p) = phase {
                    emitting.push((state, kind, next, p));
                } else {
                    assert_eq!(next, state, "silent transitions keep the state");
                }
            }
        }
    }
    emitting.sort_by_key(|e| format!("{e:?}"));
    emitting.dedup();
    let mut want = vec![
        (StateTag::Idle, PointerKind::Press, StateTag::Idle, Phase::Click),
        (StateTag::Idle, PointerKind::Press, StateTag::Drag, Phase::DragInit),
        (StateTag::Drag, PointerKind::Move, StateTag::Drag, Phase::DragMove),
        (StateTag::Drag, PointerKind::Release, StateTag::Idle, Phase::DragFinish),
    ];
    want.sort_by_key(|e| format!("{e:?}"));
    assert_eq!(emitting, want);
}

fn config() -> AutomatonConfig {
    AutomatonConfig::new(
        "action",
        [("Test", ActionType::Click), ("New", ActionType::Click), ("Move", ActionType::Drag), ("Pan", ActionType::Drag)],
    )
}

#[test]
fn random_sequences_keep_drags_bracketed() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let actions = ["Test", "New", "Move", "Pan", "Unknown"];
    let mut a = Automaton::new(config());
    let mut open: Option<(String, Point)> = None;
    let (mut clicks, mut drags) = (0, 0);
    for _ in 0..10_000 {
        let kind = PointerKind::ALL[rng.gen_range(0..3)];
        let button = if rng.gen_bool(0.9) { 1 } else { 3 };
        let evt = PointerEvent::new(kind, button, rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let active = actions[rng.gen_range(0..actions.len())];
        let cmd = a.feed(active, &evt);
        if button != 1 {
            assert!(cmd.is_none());
        }
        if let Some(c) = cmd {
            match c.phase {
                Phase::Click => {
                    assert!(open.is_none());
                    clicks += 1;
                }
                Phase::DragInit => {
                    assert!(open.is_none(), "nested drag_init");
                    assert_eq!(c.pos_init, c.pos);
                    open = Some((c.action.clone(), c.pos_init));
                }
                Phase::DragMove | Phase::DragFinish => {
                    let (act, init) = open.as_ref().expect("move/finish outside a drag");
                    assert_eq!(&c.action, act, "drag keeps its original action");
                    assert_eq!(c.pos_init, *init);
                    if c.phase == Phase::DragFinish {
                        open = None;
                        drags += 1;
                    }
                }
            }
        }
        if kind == PointerKind::Release && button == 1 {
            assert_eq!(a.state().tag(), StateTag::Idle);
        }
        assert_eq!(open.is_some(), a.state().tag() == StateTag::Drag);
    }
    assert!(clicks > 100 && drags > 100);
    a.feed("Test", &PointerEvent::new(PointerKind::Release, 1, 0.0, 0.0));
    assert_eq!(a.state(), &AutomatonState::Idle);
}

#[test]
fn pos_prev_tracks_last_event() {
    let mut a = Automaton::new(config());
    a.feed("Move", &PointerEvent::new(PointerKind::Press, 1, 0.0, 0.0));
    let m1 = a.feed("Move", &PointerEvent::new(PointerKind::Move, 1, 1.0, 0.0)).unwrap();
    assert_eq!(m1.pos_prev, Point::new(0.0, 0.0));
    let m2 = a.feed("Move", &PointerEvent::new(PointerKind::Move, 1, 2.0, 1.0)).unwrap();
    assert_eq!(m2.pos_prev, Point::new(1.0, 0.0));
    let f = a.feed("Test", &PointerEvent::new(PointerKind::Release, 1, 3.0, 1.0)).unwrap();
    assert_eq!((f.phase, f.action.as_str()), (Phase::DragFinish, "Move"));
}
