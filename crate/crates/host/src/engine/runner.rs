//! Runs an [`Engine`] on its own thread, fed through a channel.

use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use crossbeam_channel::{unbounded, Receiver, RecvTimeoutError, Sender};

use super::{Command, Engine, EngineEvent, Input};

/// Messages accepted by the control loop.
#[derive(Debug, Clone, PartialEq)]
pub enum Control {
    Command(Command),
    Input(Input),
    SelectContext(String),
    CopyContext(String),
}

/// Inputs handled between two steps of a run, at most.
const BURST: usize = 1024;

pub struct EngineHandle {
    tx: Sender<Control>,
    thread: Option<JoinHandle<Engine>>,
}

impl EngineHandle {
    /// Starts the control loop. `publish` receives every engine event in
    /// order, on the loop thread.
    pub fn spawn<F>(mut engine: Engine, mut publish: F) -> Self
    where
        F: FnMut(EngineEvent) + Send + 'static,
    {
        let (tx, rx) = unbounded();
        engine.publish_layout();
        let thread = thread::Builder::new()
            .name("engine".into())
            .spawn(move || {
                control_loop(&mut engine, &rx, &mut publish);
                engine
            })
            .expect("spawn engine thread");
        Self {
            tx,
            thread: Some(thread),
        }
    }

    pub fn sender(&self) -> Sender<Control> {
        self.tx.clone()
    }

    /// False once the loop has exited.
    pub fn send(&self, msg: Control) -> bool {
        self.tx.send(msg).is_ok()
    }

    pub fn is_finished(&self) -> bool {
        self.thread.as_ref().map(|t| t.is_finished()).unwrap_or(true)
    }

    /// Sends `quit` and waits for the loop to hand the engine back.
    pub fn shutdown(mut self) -> Engine {
        let _ = self.tx.send(Control::Command(Command::Quit));
        self.thread.take().expect("joined once").join().expect("engine thread panicked")
    }
}

impl Drop for EngineHandle {
    fn drop(&mut self) {
        if let Some(t) = self.thread.take() {
            let _ = self.tx.send(Control::Command(Command::Quit));
            let _ = t.join();
        }
    }
}

fn flush<F: FnMut(EngineEvent)>(engine: &mut Engine, publish: &mut F) {
    for ev in engine.take_events() {
        publish(ev);
    }
}

fn handle(engine: &mut Engine, msg: Control) {
    match msg {
        Control::Command(cmd) => {
            if let Err(e) = engine.control(cmd) {
                engine.report_error(&e);
            }
        }
        Control::Input(input) => {
            engine.queue_input(input);
            if !engine.is_running() {
                engine.apply_pending();
            }
        }
        Control::SelectContext(name) => {
            if let Err(e) = engine.select_context(&name) {
                engine.report_error(&e);
            }
        }
        Control::CopyContext(name) => {
            if let Err(e) = engine.copy_context(&name) {
                engine.report_error(&e);
            }
        }
    }
}

fn control_loop<F: FnMut(EngineEvent)>(engine: &mut Engine, rx: &Receiver<Control>, publish: &mut F) {
    let mut next_step = Instant::now();
    loop {
        flush(engine, publish);
        if engine.quit_requested() {
            return;
        }
        if engine.is_running() {
            for _ in 0..BURST {
                match rx.recv_deadline(next_step) {
                    Ok(msg) => {
                        handle(engine, msg);
                        if !engine.is_running() || engine.quit_requested() {
                            break;
                        }
                    }
                    Err(RecvTimeoutError::Timeout) => break,
                    Err(RecvTimeoutError::Disconnected) => {
                        let _ = engine.control(Command::Quit);
                        break;
                    }
                }
            }
            if engine.is_running() && !engine.quit_requested() {
                let started = Instant::now();
                engine.run_step();
                next_step = started + Duration::from_millis(engine.delay_ms());
            }
        } else {
            match rx.recv() {
                Ok(msg) => {
                    handle(engine, msg);
                    next_step = Instant::now();
                }
                Err(_) => {
                    let _ = engine.control(Command::Quit);
                }
            }
        }
    }
}
