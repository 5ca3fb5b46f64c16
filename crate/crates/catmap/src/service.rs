//! HTTP service over the map pipeline.
//!
//! Datasets are addressed by a hash of their CSV bytes. Computed maps and
//! quality tables are immutable and cached per parameter set; concurrent
//! requests for the same key wait for a single computation.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use catmap_core::dataset::{deduplicate, CategoricalTable, SubsetTable};
use catmap_core::glyph::{GlyphDesign, Palette};
use catmap_core::pipeline::{compare_pipelines, QualityConfig};
use catmap_core::render::{render_map, MapStyle};
use catmap_core::selection::common_categories;
use serde::Serialize;
use sha2::{Digest, Sha256};
use tokio::sync::OnceCell;

use crate::config::ServiceConfig;
use crate::error::{Error, Result};
use crate::io::{read_table, CsvOptions};
use crate::wire::{LayoutJson, PartitionJson, QualityRowJson, ReportJson, SelectionJson, SelectionRequest, SubsetTableJson};
use crate::{MapArtifacts, MapOptions, DEFAULT_QUALITY_CONFIGS};

const MAX_UPLOAD: usize = 64 * 1024 * 1024;

#[derive(Debug)]
pub struct Dataset {
    pub id: String,
    pub name: String,
    pub table: CategoricalTable,
    pub subsets: SubsetTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetSummary {
    pub id: String,
    pub name: String,
    pub rows: usize,
    pub subsets: usize,
    pub attributes: Vec<String>,
}

impl Dataset {
    fn summary(&self) -> DatasetSummary {
        DatasetSummary {
            id: self.id.clone(),
            name: self.name.clone(),
            rows: self.table.row_count(),
            subsets: self.subsets.len(),
            attributes: self.subsets.schema().attributes().iter().map(|a| a.name.clone()).collect(),
        }
    }
}

/// Content hash of the CSV bytes. Non-default parse options are hashed too, so
/// one file parsed two ways yields two datasets.
pub fn dataset_id(bytes: &[u8], options: &CsvOptions) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let defaults = CsvOptions::default();
    if options.delimiter != defaults.delimiter
        || options.missing_token != defaults.missing_token
        || options.allow_numeric != defaults.allow_numeric
    {
        h.update([0, options.delimiter, u8::from(options.allow_numeric)]);
        h.update(options.missing_token.as_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MapKey {
    dataset: String,
    options: MapOptions,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct QualityKey {
    dataset: String,
    k: usize,
    seed: u64,
    configs: Vec<QualityConfig>,
}

type Shared<T> = Arc<OnceCell<Result<Arc<T>, ApiError>>>;

pub struct AppState {
    config: ServiceConfig,
    datasets: RwLock<BTreeMap<String, Arc<Dataset>>>,
    maps: Mutex<HashMap<MapKey, Shared<MapArtifacts>>>,
    quality: Mutex<HashMap<QualityKey, Shared<Vec<QualityRowJson>>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self {
            config,
            datasets: RwLock::new(BTreeMap::new()),
            maps: Mutex::new(HashMap::new()),
            quality: Mutex::new(HashMap::new()),
        }
    }

    /// Parses and registers a dataset; re-adding identical bytes is a no-op.
    pub fn add_dataset(&self, name: &str, bytes: &[u8], options: &CsvOptions) -> Result<Arc<Dataset>> {
        let id = dataset_id(bytes, options);
        if let Some(d) = self.datasets.read().expect("dataset lock").get(&id) {
            return Ok(d.clone());
        }
        let table = read_table(bytes, options)?;
        let subsets = deduplicate(&table);
        let dataset = Arc::new(Dataset {
            id: id.clone(),
            name: name.to_owned(),
            table,
            subsets,
        });
        let mut all = self.datasets.write().expect("dataset lock");
        Ok(all.entry(id).or_insert(dataset).clone())
    }

    /// Loads every `*.csv` in the data directory with default options.
    pub fn load_data_dir(&self) -> Result<Vec<String>> {
        let Some(dir) = &self.config.data_dir else {
            return Ok(Vec::new());
        };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        paths.sort();
        let mut ids = Vec::new();
        for p in paths {
            let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
            let name = p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            ids.push(self.add_dataset(&name, &bytes, &CsvOptions::default())?.id.clone());
        }
        Ok(ids)
    }

    fn dataset(&self, id: &str) -> Result<Arc<Dataset>, ApiError> {
        self.datasets
            .read()
            .expect("dataset lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown-dataset", format!("no dataset `{id}`")))
    }

    async fn map(&self, dataset: Arc<Dataset>, options: MapOptions) -> Result<Arc<MapArtifacts>, ApiError> {
        let key = MapKey {
            dataset: dataset.id.clone(),
            options,
        };
        let cell = self.maps.lock().expect("cache lock").entry(key).or_default().clone();
        cell.get_or_init(|| async move {
            tokio::task::spawn_blocking(move || MapArtifacts::build(&dataset.subsets, &options))
                .await
                .map_err(ApiError::internal)?
                .map(Arc::new)
                .map_err(ApiError::unprocessable)
        })
        .await
        .clone()
    }

    async fn quality_rows(&self, dataset: Arc<Dataset>, key: QualityKey) -> Result<Arc<Vec<QualityRowJson>>, ApiError> {
        let cell = self.quality.lock().expect("cache lock").entry(key.clone()).or_default().clone();
        cell.get_or_init(|| async move {
            tokio::task::spawn_blocking(move || {
                let rows = compare_pipelines(&dataset.table, &key.configs, key.k, key.seed)?;
                Ok::<_, catmap_core::Error>(rows.iter().map(|r| QualityRowJson::new(r, &dataset.subsets)).collect())
            })
            .await
            .map_err(ApiError::internal)?
            .map(Arc::new)
            .map_err(|e| ApiError::unprocessable(e.into()))
        })
        .await
        .clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            code: code.to_owned(),
            message: message.into(),
        }
    }

    fn unprocessable(e: Error) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string())
    }

    fn bad_request(e: Error) -> Self {
        Self::new(StatusCode::BAD_REQUEST, e.code(), e.to_string())
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
    }

    fn param(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-parameter", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": { "code": self.code, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

/// Query string as ordered pairs; every key must be known to the endpoint.
struct Params(BTreeMap<String, String>);

impl Params {
    fn new(pairs: Vec<(String, String)>, allowed: &[&str]) -> ApiResult<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            if !allowed.contains(&k.as_str()) {
                return Err(ApiError::param(format!("unknown query parameter `{k}`")));
            }
            if map.insert(k.clone(), v).is_some() {
                return Err(ApiError::param(format!("query parameter `{k}` given twice")));
            }
        }
        Ok(Self(map))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> ApiResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse().map_err(|e| ApiError::param(format!("`{key}`: {e}"))))
            .transpose()
    }

    fn flag(&self, key: &str) -> ApiResult<Option<bool>> {
        self.get(key)
            .map(|v| match v {
                "true" | "1" | "on" => Ok(true),
                "false" | "0" | "off" => Ok(false),
                _ => Err(ApiError::param(format!("`{key}` must be true or false"))),
            })
            .transpose()
    }

    fn map_options(&self) -> ApiResult<MapOptions> {
        let d = MapOptions::default();
        let options = MapOptions {
            measure: self.parse("distance")?.unwrap_or(d.measure),
            method: self.parse("method")?.unwrap_or(d.method),
            overlap_reduction: self.flag("overlap")?.unwrap_or(d.overlap_reduction),
            seed: self.parse("seed")?.unwrap_or(d.seed),
            glyph: self.parse::<GlyphDesign>("glyph")?.unwrap_or(d.glyph),
        };
        Ok(options)
    }
}

const MAP_PARAMS: [&str; 5] = ["distance", "method", "overlap", "seed", "glyph"];

fn map_params(pairs: Vec<(String, String)>, extra: &[&str]) -> ApiResult<Params> {
    let allowed: Vec<&str> = MAP_PARAMS.iter().chain(extra).copied().collect();
    Params::new(pairs, &allowed)
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/datasets", post(upload).get(list))
        .route("/datasets/{id}", get(describe))
        .route("/datasets/{id}/layout", get(layout))
        .route("/datasets/{id}/tessellation", get(tessellation))
        .route("/datasets/{id}/fracturedness", get(fracturedness))
        .route("/datasets/{id}/quality", get(quality))
        .route("/datasets/{id}/selection", post(selection))
        .route("/datasets/{id}/render.svg", get(render))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD))
        .with_state(state)
}

async fn upload(
    State(state): State<Arc<AppState>>,
    Query(pairs): Query<Vec<(String, String)>>,
    body: Bytes,
) -> ApiResult<Response> {
    let p = Params::new(pairs, &["name", "delimiter", "missing", "allowNumeric"])?;
    let delimiter = match p.get("delimiter") {
        None => b',',
        Some(d) if d.len() == 1 => d.as_bytes()[0],
        Some(_) => return Err(ApiError::param("`delimiter` must be one ASCII character")),
    };
    let options = CsvOptions {
        delimiter,
        missing_token: p.get("missing").unwrap_or_default().to_owned(),
        allow_numeric: p.flag("allowNumeric")?.unwrap_or(false),
    };
    let name = p.get("name").unwrap_or("dataset").to_owned();
    let task_state = state.clone();
    let bytes = body.clone();
    let opts = options.clone();
    let dataset = tokio::task::spawn_blocking(move || task_state.add_dataset(&name, &bytes, &opts))
        .await
        .map_err(ApiError::internal)?
        .map_err(ApiError::bad_request)?;
    if let Some(dir) = &state.config.data_dir {
        if options == CsvOptions::default() {
            let path = dir.join(format!("{}.csv", dataset.id));
            if !path.exists() {
                std::fs::write(&path, &body).map_err(|e| ApiError::internal(Error::io(&path, e)))?;
            }
        }
    }
    Ok((StatusCode::CREATED, Json(dataset.summary())).into_response())
}

async fn list(State(state): State<Arc<AppState>>) -> Json<Vec<DatasetSummary>> {
    Json(state.datasets.read().expect("dataset lock").values().map(|d| d.summary()).collect())
}

#[derive(Serialize)]
struct DescribeJson {
    #[serde(flatten)]
    summary: DatasetSummary,
    table: SubsetTableJson,
}

async fn describe(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<DescribeJson>> {
    let d = state.dataset(&id)?;
    Ok(Json(DescribeJson {
        summary: d.summary(),
        table: SubsetTableJson::from(&d.subsets),
    }))
}

async fn layout(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> ApiResult<Json<LayoutJson>> {
    let options = map_params(pairs, &[])?.map_options()?;
    let d = state.dataset(&id)?;
    let m = state.map(d.clone(), options).await?;
    Ok(Json(m.layout_json(&d.subsets)))
}

async fn tessellation(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> ApiResult<Json<PartitionJson>> {
    let options = map_params(pairs, &[])?.map_options()?;
    let m = state.map(state.dataset(&id)?, options).await?;
    Ok(Json(PartitionJson::from(&m.map.tessellation)))
}

async fn fracturedness(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> ApiResult<Json<ReportJson>> {
    let options = map_params(pairs, &[])?.map_options()?;
    let m = state.map(state.dataset(&id)?, options).await?;
    Ok(Json(ReportJson::from_map(&m.map)))
}

async fn quality(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> ApiResult<Json<Vec<QualityRowJson>>> {
    let p = Params::new(pairs, &["k", "seed", "configs"])?;
    let k = p.parse("k")?.unwrap_or(state.config.default_k);
    let seed = p.parse("seed")?.unwrap_or(0);
    let configs = p
        .get("configs")
        .unwrap_or(DEFAULT_QUALITY_CONFIGS)
        .split(',')
        .map(|c| c.parse::<QualityConfig>().map_err(|e| ApiError::param(format!("`configs`: {e}"))))
        .collect::<ApiResult<Vec<_>>>()?;
    let d = state.dataset(&id)?;
    let key = QualityKey {
        dataset: d.id.clone(),
        k,
        seed,
        configs,
    };
    let rows = state.quality_rows(d, key).await?;
    Ok(Json(rows.as_ref().clone()))
}

async fn selection(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
    body: Bytes,
) -> ApiResult<Json<SelectionJson>> {
    let options = map_params(pairs, &[])?.map_options()?;
    let d = state.dataset(&id)?;
    let request: SelectionRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::unprocessable(Error::Json(e)))?;
    if request.ids.is_empty() {
        return Err(ApiError::unprocessable(catmap_core::Error::EmptySelection.into()));
    }
    let m = state.map(d.clone(), options).await?;
    let r = common_categories(&d.subsets, &request.ids, Some(&m.map.ranking))
        .map_err(|e| ApiError::unprocessable(e.into()))?;
    Ok(Json(SelectionJson::new(&r, &d.subsets)))
}

async fn render(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> ApiResult<Response> {
    let p = map_params(pairs, &["attribute", "secondary"])?;
    let options = p.map_options()?;
    let d = state.dataset(&id)?;
    let schema = d.subsets.schema();
    let find = |key: &str| {
        p.get(key)
            .map(|name| {
                schema
                    .find_attribute(name)
                    .ok_or_else(|| ApiError::param(format!("`{key}`: unknown attribute `{name}`")))
            })
            .transpose()
    };
    let style = MapStyle {
        primary: find("attribute")?,
        secondary: find("secondary")?,
    };
    let m = state.map(d.clone(), options).await?;
    let svg = render_map(
        &m.map.layout.positions,
        &m.map.tessellation.partition,
        &d.subsets,
        style,
        &options.glyph_spec(),
        &Palette::category10(),
    )
    .map_err(|e| ApiError::unprocessable(e.into()))?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

/// Binds, loads the data directory and serves until interrupted.
pub async fn serve(config: ServiceConfig) -> Result<()> {
    let addr: SocketAddr = format!("{}:{}", config.host, config.port)
        .parse()
        .map_err(|e| Error::Config(format!("bad listen address: {e}")))?;
    let state = Arc::new(AppState::new(config));
    let loaded = state.load_data_dir()?;
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| Error::io(addr.to_string(), e))?;
    eprintln!("serving {} dataset(s) on http://{addr}", loaded.len());
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(addr.to_string(), e))
}
