//! Single-file SQLite store for widget collections, one row set per
//! simulation context.

use std::path::{Path, PathBuf};

use rusqlite::{params, Connection, ErrorCode, OptionalExtension, Transaction};
use workbench_core::model::{
    validate_collection, CommentWidgetDef, DataArrayDef, DataKind, DataWidgetConfig, DataWidgetDef, Geometry,
    ParamKind, ParamRef, ParamValue, ParamWidgetConfig, ParameterDef, ParameterWidgetDef, SimulationContext,
    Violation, WidgetCollection, DEFAULT_CONTEXT,
};

pub const SCHEMA_VERSION: i64 = 1;

pub const TABLES: [&str; 6] = [
    "tb_simulation",
    "tb_parameter",
    "tb_dataarray",
    "tb_parameterwidget",
    "tb_datawidget",
    "tb_commentwidget",
];

const SCHEMA: &str = "
CREATE TABLE IF NOT EXISTS tb_simulation (
    id       INTEGER PRIMARY KEY,
    name     TEXT NOT NULL UNIQUE CHECK (name <> ''),
    app_name TEXT NOT NULL DEFAULT ''
);
CREATE TABLE IF NOT EXISTS tb_parameter (
    id         INTEGER PRIMARY KEY,
    sim_id     INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    position   INTEGER NOT NULL,
    name       TEXT NOT NULL,
    kind       TEXT NOT NULL,
    value      TEXT NOT NULL,
    list_index INTEGER NOT NULL CHECK (list_index >= -1),
    UNIQUE (sim_id, name, list_index)
);
CREATE TABLE IF NOT EXISTS tb_dataarray (
    id       INTEGER PRIMARY KEY,
    sim_id   INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    position INTEGER NOT NULL,
    name     TEXT NOT NULL,
    kind     TEXT NOT NULL,
    UNIQUE (sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_parameterwidget (
    id           INTEGER PRIMARY KEY,
    sim_id       INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    position     INTEGER NOT NULL,
    kind         TEXT NOT NULL,
    name         TEXT NOT NULL,
    x            INTEGER NOT NULL,
    y            INTEGER NOT NULL,
    config       TEXT NOT NULL,
    target_name  TEXT NOT NULL,
    target_index INTEGER NOT NULL,
    UNIQUE (sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_datawidget (
    id       INTEGER PRIMARY KEY,
    sim_id   INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    position INTEGER NOT NULL,
    kind     TEXT NOT NULL,
    name     TEXT NOT NULL,
    x        INTEGER NOT NULL,
    y        INTEGER NOT NULL,
    config   TEXT NOT NULL,
    target   TEXT NOT NULL,
    UNIQUE (sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_commentwidget (
    id       INTEGER PRIMARY KEY,
    sim_id   INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    position INTEGER NOT NULL,
    name     TEXT NOT NULL,
    x        INTEGER NOT NULL,
    y        INTEGER NOT NULL,
    body     TEXT NOT NULL,
    UNIQUE (sim_id, name)
);
";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("store corrupt: {0}")]
    Corrupt(String),
    #[error("schema mismatch: file has version {found}, expected {SCHEMA_VERSION}")]
    SchemaMismatch { found: i64 },
    #[error("store locked: {0} is open in another process")]
    Locked(PathBuf),
    #[error("write failed: {0}")]
    WriteFailed(String),
    #[error("no such context `{0}`")]
    NoSuchContext(String),
    #[error("context exists: `{0}`")]
    ContextExists(String),
    #[error("invalid collection: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("store error: {0}")]
    Sql(#[from] rusqlite::Error),
}

fn is_code(e: &rusqlite::Error, code: ErrorCode) -> bool {
    e.sqlite_error_code() == Some(code)
}

/// The app source path with its last extension replaced by `.db`, unless
/// an explicit path was given.
pub fn default_db_path(app_source_path: impl AsRef<Path>, cli_arg: Option<&Path>) -> PathBuf {
    match cli_arg {
        Some(p) => p.to_path_buf(),
        None => app_source_path.as_ref().with_extension("db"),
    }
}

/// An open store. Holds an exclusive lock on the file until dropped.
#[derive(Debug)]
pub struct Store {
    path: PathBuf,
    conn: Connection,
}

impl Store {
    /// Opens or creates the store at `path`. A new store gets the six tables
    /// and the default context.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let conn = Connection::open(&path).map_err(|e| StoreError::Corrupt(e.to_string()))?;
        // Fail at once instead of waiting for another holder of the lock.
        conn.busy_timeout(std::time::Duration::ZERO)?;
        let store = Store { path, conn };
        store.init().map_err(|e| match e {
            StoreError::Sql(e) if is_code(&e, ErrorCode::NotADatabase) => StoreError::Corrupt(e.to_string()),
            StoreError::Sql(e) if is_code(&e, ErrorCode::DatabaseCorrupt) => StoreError::Corrupt(e.to_string()),
            StoreError::Sql(e)
                if is_code(&e, ErrorCode::DatabaseBusy) || is_code(&e, ErrorCode::DatabaseLocked) =>
            {
                StoreError::Locked(store.path.clone())
            }
            other => other,
        })?;
        Ok(store)
    }

    /// Private in-memory store, used by tests and the `parse` subcommand's
    /// dry runs.
    pub fn open_in_memory() -> Result<Self, StoreError> {
        let store = Store {
            path: PathBuf::from(":memory:"),
            conn: Connection::open_in_memory()?,
        };
        store.init()?;
        Ok(store)
    }

    fn init(&self) -> Result<(), StoreError> {
        self.conn.pragma_update(None, "locking_mode", "EXCLUSIVE")?;
        self.conn.pragma_update(None, "foreign_keys", true)?;
        // Taking a write lock once keeps it for the life of the connection.
        self.conn.execute_batch("BEGIN EXCLUSIVE")?;
        let result = self.init_locked();
        match result {
            Ok(()) => self.conn.execute_batch("COMMIT")?,
            Err(_) => {
                let _ = self.conn.execute_batch("ROLLBACK");
            }
        }
        result
    }

    fn init_locked(&self) -> Result<(), StoreError> {
        let version: i64 = self.conn.pragma_query_value(None, "user_version", |r| r.get(0))?;
        match version {
            0 => {
                self.conn.execute_batch(SCHEMA)?;
                self.conn.pragma_update(None, "user_version", SCHEMA_VERSION)?;
                let n: i64 = self.conn.query_row("SELECT COUNT(*) FROM tb_simulation", [], |r| r.get(0))?;
                if n == 0 {
                    self.conn.execute(
                        "INSERT INTO tb_simulation (name, app_name) VALUES (?1, '')",
                        [DEFAULT_CONTEXT],
                    )?;
                }
                Ok(())
            }
            SCHEMA_VERSION => {
                for t in TABLES {
                    let found: Option<String> = self
                        .conn
                        .query_row("SELECT name FROM sqlite_master WHERE type='table' AND name=?1", [t], |r| r.get(0))
                        .optional()?;
                    if found.is_none() {
                        return Err(StoreError::Corrupt(format!("missing table {t}")));
                    }
                }
                Ok(())
            }
            found => Err(StoreError::SchemaMismatch { found }),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Raw connection, for inspection with plain SQL.
    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    pub fn list_contexts(&self) -> Result<Vec<String>, StoreError> {
        let mut stmt = self.conn.prepare("SELECT name FROM tb_simulation ORDER BY id")?;
        let names = stmt.query_map([], |r| r.get(0))?.collect::<Result<_, _>>()?;
        Ok(names)
    }

    pub fn has_context(&self, name: &str) -> Result<bool, StoreError> {
        Ok(self.context_id(&self.conn, name)?.is_some())
    }

    fn context_id(&self, conn: &Connection, name: &str) -> Result<Option<i64>, StoreError> {
        Ok(conn
            .query_row("SELECT id FROM tb_simulation WHERE name = ?1", [name], |r| r.get(0))
            .optional()?)
    }

    /// Replaces every row of `coll.context` in one transaction, creating the
    /// context if needed.
    pub fn save_collection(&mut self, coll: &WidgetCollection) -> Result<(), StoreError> {
        let violations = validate_collection(coll);
        if !violations.is_empty() {
            return Err(StoreError::Invalid(violations));
        }
        let tx = self.conn.transaction().map_err(|e| StoreError::WriteFailed(e.to_string()))?;
        write_collection(&tx, coll).map_err(|e| StoreError::WriteFailed(e.to_string()))?;
        tx.commit().map_err(|e| StoreError::WriteFailed(e.to_string()))
    }

    pub fn load_collection(&self, name: &str) -> Result<WidgetCollection, StoreError> {
        let (id, app_name): (i64, String) = self
            .conn
            .query_row("SELECT id, app_name FROM tb_simulation WHERE name = ?1", [name], |r| {
                Ok((r.get(0)?, r.get(1)?))
            })
            .optional()?
            .ok_or_else(|| StoreError::NoSuchContext(name.to_string()))?;
        let mut coll = WidgetCollection {
            context: SimulationContext {
                name: name.to_string(),
                app_name,
            },
            ..WidgetCollection::default()
        };

        let mut stmt = self
            .conn
            .prepare("SELECT name, kind, value, list_index FROM tb_parameter WHERE sim_id = ?1 ORDER BY position")?;
        let rows = stmt.query_map([id], |r| {
            Ok((r.get::<_, String>(0)?, r.get::<_, String>(1)?, r.get::<_, String>(2)?, r.get::<_, i32>(3)?))
        })?;
        for row in rows {
            let (pname, kind, value, list_index) = row?;
            let kind = ParamKind::parse(&kind).ok_or_else(|| corrupt("tb_parameter.kind", &kind))?;
            let value: ParamValue = from_json("tb_parameter.value", &value)?;
            coll.parameters.push(ParameterDef {
                name: pname,
                kind,
                value,
                list_index,
            });
        }

        let mut stmt = self
            .conn
            .prepare("SELECT name, kind FROM tb_dataarray WHERE sim_id = ?1 ORDER BY position")?;
        let rows = stmt.query_map([id], |r| Ok((r.get::<_, String>(0)?, r.get::<_, String>(1)?)))?;
        for row in rows {
            let (dname, kind) = row?;
            let kind = DataKind::parse(&kind).ok_or_else(|| corrupt("tb_dataarray.kind", &kind))?;
            coll.data.push(DataArrayDef { name: dname, kind });
        }

        let mut stmt = self.conn.prepare(
            "SELECT kind, name, x, y, config, target_name, target_index FROM tb_parameterwidget \
             WHERE sim_id = ?1 ORDER BY position",
        )?;
        let rows = stmt.query_map([id], |r| {
            Ok((
                r.get::<_, String>(0)?,
                r.get::<_, String>(1)?,
                r.get::<_, i32>(2)?,
                r.get::<_, i32>(3)?,
                r.get::<_, String>(4)?,
                r.get::<_, String>(5)?,
                r.get::<_, i32>(6)?,
            ))
        })?;
        for row in rows {
            let (kind, wname, x, y, config, target, index) = row?;
            let config: ParamWidgetConfig = from_json("tb_parameterwidget.config", &config)?;
            if config.kind().keyword() != kind {
                return Err(corrupt("tb_parameterwidget.kind", &kind));
            }
            coll.pwidgets.push(ParameterWidgetDef {
                name: wname,
                geometry: Geometry::new(x, y),
                config,
                target: ParamRef::new(target, index),
            });
        }

        let mut stmt = self.conn.prepare(
            "SELECT kind, name, x, y, config, target FROM tb_datawidget WHERE sim_id = ?1 ORDER BY position",
        )?;
        let rows = stmt.query_map([id], |r| {
            Ok((
                r.get::<_, String>(0)?,
                r.get::<_, String>(1)?,
                r.get::<_, i32>(2)?,
                r.get::<_, i32>(3)?,
                r.get::<_, String>(4)?,
                r.get::<_, String>(5)?,
            ))
        })?;
        for row in rows {
            let (kind, wname, x, y, config, target) = row?;
            let config: DataWidgetConfig = from_json("tb_datawidget.config", &config)?;
            if config.kind().keyword() != kind {
                return Err(corrupt("tb_datawidget.kind", &kind));
            }
            coll.dwidgets.push(DataWidgetDef {
                name: wname,
                geometry: Geometry::new(x, y),
                config,
                target,
            });
        }

        let mut stmt = self
            .conn
            .prepare("SELECT name, x, y, body FROM tb_commentwidget WHERE sim_id = ?1 ORDER BY position")?;
        let rows = stmt.query_map([id], |r| {
            Ok(CommentWidgetDef {
                name: r.get(0)?,
                geometry: Geometry::new(r.get(1)?, r.get(2)?),
                body: r.get(3)?,
            })
        })?;
        for row in rows {
            coll.comments.push(row?);
        }
        Ok(coll)
    }

    /// Deep-copies every row of `src` into a new context `dst`.
    pub fn copy_context(&mut self, src: &str, dst: &str) -> Result<(), StoreError> {
        if self.has_context(dst)? {
            return Err(StoreError::ContextExists(dst.to_string()));
        }
        let mut coll = self.load_collection(src)?;
        coll.context.name = dst.to_string();
        self.save_collection(&coll)
    }
}

fn corrupt(field: &str, value: &str) -> StoreError {
    StoreError::Corrupt(format!("bad {field} `{value}`"))
}

fn from_json<T: serde::de::DeserializeOwned>(field: &str, text: &str) -> Result<T, StoreError> {
    serde_json::from_str(text).map_err(|e| StoreError::Corrupt(format!("bad {field}: {e}")))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("model values serialize")
}

fn write_collection(tx: &Transaction<'_>, coll: &WidgetCollection) -> rusqlite::Result<()> {
    let name = &coll.context.name;
    let id: i64 = match tx
        .query_row("SELECT id FROM tb_simulation WHERE name = ?1", [name], |r| r.get(0))
        .optional()?
    {
        Some(id) => {
            tx.execute("UPDATE tb_simulation SET app_name = ?2 WHERE id = ?1", params![id, coll.context.app_name])?;
            id
        }
        None => {
            tx.execute(
                "INSERT INTO tb_simulation (name, app_name) VALUES (?1, ?2)",
                params![name, coll.context.app_name],
            )?;
            tx.last_insert_rowid()
        }
    };
    for t in &TABLES[1..] {
        tx.execute(&format!("DELETE FROM {t} WHERE sim_id = ?1"), [id])?;
    }

    let mut stmt = tx.prepare(
        "INSERT INTO tb_parameter (sim_id, position, name, kind, value, list_index) VALUES (?1, ?2, ?3, ?4, ?5, ?6)",
    )?;
    for (i, p) in coll.parameters.iter().enumerate() {
        stmt.execute(params![id, i as i64, p.name, p.kind.as_str(), to_json(&p.value), p.list_index])?;
    }
    let mut stmt = tx.prepare("INSERT INTO tb_dataarray (sim_id, position, name, kind) VALUES (?1, ?2, ?3, ?4)")?;
    for (i, d) in coll.data.iter().enumerate() {
        stmt.execute(params![id, i as i64, d.name, d.kind.as_str()])?;
    }
    let mut stmt = tx.prepare(
        "INSERT INTO tb_parameterwidget (sim_id, position, kind, name, x, y, config, target_name, target_index) \
         VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9)",
    )?;
    for (i, w) in coll.pwidgets.iter().enumerate() {
        stmt.execute(params![
            id,
            i as i64,
            w.kind().keyword(),
            w.name,
            w.geometry.x,
            w.geometry.y,
            to_json(&w.config),
            w.target.name,
            w.target.list_index
        ])?;
    }
    let mut stmt = tx.prepare(
        "INSERT INTO tb_datawidget (sim_id, position, kind, name, x, y, config, target) \
         VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)",
    )?;
    for (i, w) in coll.dwidgets.iter().enumerate() {
        stmt.execute(params![
            id,
            i as i64,
            w.kind().keyword(),
            w.name,
            w.geometry.x,
            w.geometry.y,
            to_json(&w.config),
            w.target
        ])?;
    }
    let mut stmt = tx.prepare(
        "INSERT INTO tb_commentwidget (sim_id, position, name, x, y, body) VALUES (?1, ?2, ?3, ?4, ?5, ?6)",
    )?;
    for (i, c) in coll.comments.iter().enumerate() {
        stmt.execute(params![id, i as i64, c.name, c.geometry.x, c.geometry.y, c.body])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_path_examples() {
        assert_eq!(default_db_path("demo01_HelloWorld.src", None), PathBuf::from("demo01_HelloWorld.db"));
        assert_eq!(
            default_db_path("demo01_HelloWorld.src", Some(Path::new("demo01_parameters.db"))),
            PathBuf::from("demo01_parameters.db")
        );
        assert_eq!(default_db_path("a.b.src", None), PathBuf::from("a.b.db"));
        assert_eq!(default_db_path("decay", None), PathBuf::from("decay.db"));
    }

    #[test]
    fn fresh_memory_store_has_default_context() {
        let s = Store::open_in_memory().unwrap();
        assert_eq!(s.list_contexts().unwrap(), vec![DEFAULT_CONTEXT.to_string()]);
        let c = s.load_collection(DEFAULT_CONTEXT).unwrap();
        assert!(c.is_empty());
        assert!(matches!(s.load_collection("missing"), Err(StoreError::NoSuchContext(_))));
    }

    #[test]
    fn invalid_collection_is_refused() {
        let mut s = Store::open_in_memory().unwrap();
        let mut c = WidgetCollection::new("x");
        c.data.push(DataArrayDef {
            name: String::new(),
            kind: DataKind::Text,
        });
        assert!(matches!(s.save_collection(&c), Err(StoreError::Invalid(_))));
        assert!(!s.has_context("x").unwrap());
    }
}
