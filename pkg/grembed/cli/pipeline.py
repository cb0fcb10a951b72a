import csv
import json
import logging
import os
import time
from dataclasses import asdict
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from grembed.cli.config import PipelineConfig
from grembed.cli.types import OnStageCompleteCallable, OnStageErrorCallable
from grembed.cluster import elbow_scan, kmeans, load_clustering, save_clustering, save_elbow_curve
from grembed.embed import (
    HOPE,
    NODE2VEC,
    SPECTRAL,
    Embedding,
    hope_embed,
    load_embedding,
    node2vec_embed,
    save_embedding,
    spectral_embed,
)
from grembed.errors import EmptyResultError, MissingArtifactError
from grembed.evaluation import (
    EvalReport,
    comparison_table,
    evaluate_method,
    ranked_lists,
    save_reports,
    save_sweep_csv,
    sweep_recommendation_count,
)
from grembed.hybrid import (
    FUSION_NETWORK,
    build_hybrid_dataset,
    fit_linear_blend,
    load_mlp,
    predict_blend,
    predict_fused,
    predict_hybrid,
    save_blend,
    save_mlp,
    train_mlp,
)
from grembed.ingest import (
    build_ratings_table,
    filter_active_users,
    load_friendships,
    load_item_sets,
    load_ratings_table,
    parse_dataset,
    save_friendships,
    save_item_sets,
    save_ratings_table,
    split_holdout,
)
from grembed.recommend import (
    GroundTruth,
    eligible_recommenders,
    load_recommendations,
    random_recommendations,
    recommend_all,
    save_recommendations,
    select_top_users,
)
from grembed.socialgraph import build_weighted_graph, graph_stats, load_edge_list, save_edge_list
from grembed.utils import derive_seed, ensure_parent, format_real

STAGES = ("ingest", "graph", "embed", "cluster", "recommend", "hybrid", "evaluate")
ALL = "all"
RANDOM = "random"
MLP = "hybrid"
BLEND = "blend"

RATINGS_FILE = "ratings.json"
HELDOUT_FILE = "heldout.json"
FRIENDSHIPS_FILE = "friendships.tsv"
GRAPH_FILE = "graph.tsv"
GRAPH_STATS_FILE = "graph_stats.json"
COHORT_FILE = "cohort.json"
MODEL_FILE = "hybrid_model.json"
SPLIT_FILE = "hybrid_split.json"
LOSSES_FILE = "hybrid_losses.csv"
SGNS_LOSSES_FILE = "node2vec_losses.csv"
BLEND_FILE = "blend_weights.json"
REPORT_FILE = "report.json"
SWEEP_FILE = "sweep.csv"
TABLE_FILE = "table.txt"
MANIFEST_FILE = "manifest.json"


def embedding_file(method: str) -> str:
    return f"embedding_{method}.csv"


def clusters_file(method: str) -> str:
    return f"clusters_{method}.csv"


def centroids_file(method: str) -> str:
    return f"centroids_{method}.csv"


def elbow_file(method: str) -> str:
    return f"elbow_{method}.csv"


def recommendations_file(method: str) -> str:
    return f"recommendations_{method}.json"


def _write_json(path: str, payload) -> None:
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class Pipeline:
    """
    Staged runner: every stage reads its inputs from ``config.output_dir`` and writes its artifacts there.

    Attributes:
    -----------
    config : PipelineConfig
        Validated configuration of the run.
    methods : List[str]
        Embedding methods handled by the embed, cluster and recommend stages.
    onStageComplete : OnStageCompleteCallable
        Called after each successful stage; logs by default.
    onStageError : OnStageErrorCallable
        Called when a stage raises, before the error propagates; logs by default.
    """

    def __init__(
        self,
        config: PipelineConfig,
        methods: Optional[Sequence[str]] = None,
        onStageComplete: Optional[OnStageCompleteCallable] = None,
        onStageError: Optional[OnStageErrorCallable] = None,
    ):
        self.config = config.check()
        self.methods = list(methods) if methods else list(config.methods)
        self.onStageComplete = onStageComplete or self._default_onStageComplete
        self.onStageError = onStageError or self._default_onStageError
        self._stages: Dict[str, Callable[[], List[str]]] = {
            "ingest": self.ingest,
            "graph": self.graph,
            "embed": self.embed,
            "cluster": self.cluster,
            "recommend": self.recommend,
            "hybrid": self.hybrid,
            "evaluate": self.evaluate,
        }

    @staticmethod
    def _default_onStageComplete(stage: str, elapsed: float, artifacts: List[str]) -> None:
        logging.info("Stage '%s' finished in %.2fs, wrote %d artifacts", stage, elapsed, len(artifacts))

    @staticmethod
    def _default_onStageError(stage: str, error: Exception) -> None:
        logging.error("Stage '%s' failed: %s", stage, error)

    def path(self, name: str) -> str:
        return os.path.join(self.config.output_dir, name)

    def require(self, stage: str, *names: str) -> List[str]:
        """Paths of the named inputs; raises MissingArtifactError for the first absent one."""
        paths = [self.path(n) for n in names]
        for path in paths:
            if not os.path.exists(path):
                raise MissingArtifactError(path, stage)
        return paths

    def seed_for(self, name: str) -> int:
        return derive_seed(self.config.seed, name)

    def run(self, stage: str) -> Dict[str, List[str]]:
        """Runs one stage, or every stage in order for ``all``, and updates the manifest.

        Returns:
            Dict[str, List[str]]: Artifacts written per stage.
        """
        if stage != ALL and stage not in self._stages:
            raise ValueError(f"Unknown stage '{stage}', expected one of {list(STAGES) + [ALL]}")

        written: Dict[str, List[str]] = {}
        for name in STAGES if stage == ALL else (stage,):
            start = time.perf_counter()
            try:
                artifacts = self._stages[name]()
            except Exception as e:
                self.onStageError(name, e)
                raise
            elapsed = time.perf_counter() - start
            self._record(name, elapsed, artifacts)
            self.onStageComplete(name, elapsed, artifacts)
            written[name] = artifacts
        return written

    def _record(self, stage: str, elapsed: float, artifacts: List[str]) -> None:
        path = self.path(MANIFEST_FILE)
        manifest = _read_json(path) if os.path.exists(path) else {}
        if manifest.get("config_hash") != self.config.config_hash():
            manifest = {"stages": {}}
        manifest.update(config_hash=self.config.config_hash(), seed=self.config.seed, config=self.config.to_dict())
        manifest["stages"][stage] = {
            "seconds": round(elapsed, 6),
            "artifacts": sorted(os.path.relpath(a, self.config.output_dir) for a in artifacts),
        }
        _write_json(path, manifest)

    def ingest(self) -> List[str]:
        cfg = self.config.ingest
        reviews_path, friends_path = cfg.reviews_path, cfg.friends_path
        for path in (reviews_path, friends_path):
            if not os.path.exists(path):
                raise MissingArtifactError(path, "ingest")
        reviews, friendships = parse_dataset(reviews_path, friends_path)
        active = filter_active_users(reviews, friendships, cfg.min_reviews)
        ratings = build_ratings_table(reviews, active, cfg.high_threshold, cfg.low_threshold)
        visible, held_out = split_holdout(ratings, cfg.holdout_fraction, self.seed_for("ingest.holdout"))
        logging.info(visible.display())

        paths = [self.path(RATINGS_FILE), self.path(HELDOUT_FILE), self.path(FRIENDSHIPS_FILE)]
        save_ratings_table(paths[0], visible)
        save_item_sets(paths[1], held_out)
        save_friendships(paths[2], friendships.restricted_to(active))
        return paths

    def _ratings(self, stage: str):
        (path,) = self.require(stage, RATINGS_FILE)
        return load_ratings_table(path, self.config.ingest.high_threshold, self.config.ingest.low_threshold)

    def graph(self) -> List[str]:
        ratings = self._ratings("graph")
        (friends_path,) = self.require("graph", FRIENDSHIPS_FILE)
        friendships = load_friendships(friends_path)
        graph = build_weighted_graph(friendships, ratings, set(ratings.users), self.config.graph.epsilon)
        stats = graph_stats(graph)
        logging.info(stats.display())

        paths = [self.path(GRAPH_FILE), self.path(GRAPH_STATS_FILE)]
        save_edge_list(paths[0], graph)
        _write_json(paths[1], asdict(stats))
        return paths

    def _embed_one(self, method: str, graph, losses: List[float]) -> Embedding:
        cfg, d = self.config, self.config.dimensions
        if method == NODE2VEC:

            def on_epoch_end(epoch: int, loss: float) -> None:
                logging.debug("node2vec epoch %d: loss %.6f", epoch + 1, loss)
                losses.append(loss)

            return node2vec_embed(
                graph,
                cfg.node2vec.params(),
                d=d,
                seed=self.seed_for("embed.node2vec"),
                workers=cfg.workers,
                progress=cfg.progress,
                on_epoch_end=on_epoch_end,
            )
        if method == SPECTRAL:
            return spectral_embed(
                graph,
                d=d,
                strict=cfg.spectral.strict,
                seed=self.seed_for("embed.spectral"),
                diffusion_time=cfg.spectral.diffusion_time,
            )
        if method == HOPE:
            return hope_embed(graph, d=d, beta=cfg.hope.beta, beta_ratio=cfg.hope.beta_ratio)
        raise ValueError(f"Unknown embedding method '{method}'")

    def embed(self) -> List[str]:
        (graph_path,) = self.require("embed", GRAPH_FILE)
        graph = load_edge_list(graph_path)
        paths = []
        for method in self.methods:
            losses: List[float] = []
            embedding = self._embed_one(method, graph, losses)
            path = self.path(embedding_file(method))
            save_embedding(path, embedding)
            logging.info("%s embedding: %d x %d written to %s", method, graph.n, embedding.dim, path)
            paths.append(path)
            if method == NODE2VEC:
                paths.append(self.path(SGNS_LOSSES_FILE))
                ensure_parent(paths[-1])
                with open(paths[-1], "w", newline="", encoding="utf-8") as fh:
                    writer = csv.writer(fh, lineterminator="\n")
                    writer.writerow(["epoch", "loss"])
                    writer.writerows([epoch, format_real(loss)] for epoch, loss in enumerate(losses, 1))
        return paths

    def _embedding(self, stage: str, method: str) -> Embedding:
        (path,) = self.require(stage, embedding_file(method))
        return load_embedding(path, method)

    def cluster(self) -> List[str]:
        cfg = self.config.cluster
        paths = []
        for method in self.methods:
            embedding = self._embedding("cluster", method)
            seed = self.seed_for(f"cluster.{method}")
            scan = elbow_scan(embedding.vectors, cfg.k_min, cfg.k_max, seed, cfg.max_iter, cfg.n_init)
            clustering = kmeans(embedding.vectors, scan.k, cfg.max_iter, seed, cfg.n_init)
            logging.info("%s: %s", method, clustering.display())

            files = [self.path(clusters_file(method)), self.path(centroids_file(method)), self.path(elbow_file(method))]
            save_clustering(files[0], files[1], embedding.users, clustering)
            save_elbow_curve(files[2], scan)
            paths += files
        return paths

    def _held_out(self, stage: str) -> GroundTruth:
        (path,) = self.require(stage, HELDOUT_FILE)
        return GroundTruth(load_item_sets(path))

    def _cohort(self, stage: str) -> List[str]:
        (path,) = self.require(stage, COHORT_FILE)
        return list(_read_json(path))

    def recommend(self) -> List[str]:
        cfg = self.config.recommend
        ratings = self._ratings("recommend")
        truth = self._held_out("recommend")
        (graph_path,) = self.require("recommend", GRAPH_FILE)
        graph = load_edge_list(graph_path)

        visible = GroundTruth(dict(ratings.liked))
        eligible = eligible_recommenders(visible, cfg.lower_bound, cfg.upper_bound)
        pool = [u for u in graph.users if truth.of(u)]
        if not pool:
            raise EmptyResultError("No graph user has held-out items to evaluate; raise ingest.holdout_fraction")
        if len(pool) < cfg.cohort_size:
            logging.warning("Only %d graph users have held-out items; cohort shrinks to them", len(pool))
        cohort = select_top_users(graph, min(cfg.cohort_size, len(pool)), among=pool)
        logging.info("Cohort: %d users; %d eligible recommenders", len(cohort), len(eligible))

        paths = [self.path(COHORT_FILE)]
        _write_json(paths[0], cohort)
        for method in self.methods:
            embedding = self._embedding("recommend", method)
            clusters_path, centroids_path = self.require("recommend", clusters_file(method), centroids_file(method))
            users, clustering = load_clustering(clusters_path, centroids_path, embedding.vectors)
            if users != embedding.users:
                raise ValueError(f"{clusters_path} does not follow the row order of {embedding_file(method)}")

            recs = recommend_all(
                cohort, embedding, clustering, visible, eligible, cfg.n_neighbors, cfg.max_items, self.config.workers
            )
            path = self.path(recommendations_file(method))
            save_recommendations(path, recs)
            paths.append(path)

        universe = set().union(*ratings.liked.values(), *ratings.disliked.values(), *truth.high_rated.values())
        baseline = random_recommendations(
            cohort, universe, cfg.max_items, self.seed_for("recommend.random"), exclude=visible
        )
        path = self.path(recommendations_file(RANDOM))
        save_recommendations(path, baseline)
        paths.append(path)
        return paths

    def _hybrid_dataset(self, stage: str):
        cohort = self._cohort(stage)
        truth = self._held_out(stage)
        recs = {}
        for method in self.config.methods:
            (path,) = self.require(stage, recommendations_file(method))
            recs[method] = load_recommendations(path)
        ratings = self._ratings(stage)
        rated = {u: ratings.liked_by(u) | ratings.disliked_by(u) for u in cohort}
        dataset = build_hybrid_dataset(cohort, recs, truth, self.config.methods, self.config.hybrid.weighted, rated)
        return dataset, recs

    def hybrid(self) -> List[str]:
        cfg = self.config.hybrid
        dataset, _ = self._hybrid_dataset("hybrid")
        logging.info(dataset.display())

        def on_epoch_end(epoch: int, loss: float) -> None:
            logging.debug("MLP epoch %d: train loss %.8f", epoch + 1, loss)

        seed = self.seed_for("hybrid")
        result = train_mlp(dataset, cfg.split_ratio, cfg.epochs, cfg.lr, seed, cfg.hidden, on_epoch_end)
        train_rows = np.array([dataset.users.index(u) for u in result.train_users], dtype=np.int64)
        alpha = fit_linear_blend(dataset.subset(train_rows), cfg.blend_epochs, cfg.blend_lr)

        paths = save_mlp(self.path(MODEL_FILE), result.model, seed, cfg.epochs, dataset.restaurants)
        paths += [self.path(SPLIT_FILE), self.path(BLEND_FILE), self.path(LOSSES_FILE)]
        _write_json(paths[-3], {"train": result.train_users, "test": result.test_users})
        save_blend(paths[-2], list(dataset.methods), alpha)
        self._save_losses(paths[-1], result.train_losses, result.validation_losses)
        return paths

    @staticmethod
    def _save_losses(path: str, train: List[float], validation: List[float]) -> None:
        ensure_parent(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["epoch", "train_mse", "validation_mse"])
            for epoch, loss in enumerate(train, 1):
                val = format_real(validation[epoch - 1]) if epoch <= len(validation) else ""
                writer.writerow([epoch, format_real(loss), val])

    def _fused_rankings(self, stage: str):
        """Full rankings of the cohort by the persisted MLP and the persisted blend, plus the split."""
        dataset, recs = self._hybrid_dataset(stage)
        model_path, blend_path, split_path = self.require(stage, MODEL_FILE, BLEND_FILE, SPLIT_FILE)
        model, restaurants = load_mlp(model_path)
        if restaurants != dataset.restaurants:
            raise ValueError(f"{model_path} was trained on another restaurant universe; rerun the hybrid stage")
        weights = _read_json(blend_path)
        missing = [m for m in dataset.methods if m not in weights]
        if missing:
            raise ValueError(f"{blend_path} lacks weights for {missing}; rerun the hybrid stage")
        alpha = np.array([weights[m] for m in dataset.methods])

        def fused(i: int) -> List[str]:
            if self.config.hybrid.fusion == FUSION_NETWORK:
                return predict_hybrid(model, dataset.x[i], restaurants, dataset.r)
            return predict_fused(model, dataset.x[i], dataset.support[i], dataset.rated[i], restaurants, dataset.r)

        rankings = {
            MLP: {u: fused(i) for i, u in enumerate(dataset.users)},
            BLEND: {
                u: predict_blend(alpha, dataset.x[i], restaurants, dataset.r, excluded=dataset.rated[i])
                for i, u in enumerate(dataset.users)
            },
        }
        return rankings, recs, _read_json(split_path)

    def evaluate(self) -> List[str]:
        cfg = self.config.evaluate
        truth = self._held_out("evaluate")
        cohort = self._cohort("evaluate")
        rankings, recs, split = self._fused_rankings("evaluate")
        (random_path,) = self.require("evaluate", recommendations_file(RANDOM))
        recs[RANDOM] = load_recommendations(random_path)

        reports: List[EvalReport] = []
        sweeps: List[EvalReport] = []
        for method in self.config.methods + [RANDOM]:
            lists = ranked_lists(recs[method])
            reports += [evaluate_method(lists, truth, k, method, cohort) for k in cfg.k_values]
            if split["test"]:
                reports += [evaluate_method(lists, truth, k, f"{method} (test)", split["test"]) for k in cfg.k_values]
            sweeps += sweep_recommendation_count(lists, truth, cfg.sweep_k, method, cohort)

        for model in (MLP, BLEND):
            for part in ("train", "test"):
                if split[part]:
                    reports += [
                        evaluate_method(rankings[model], truth, k, f"{model} ({part})", split[part])
                        for k in cfg.k_values
                    ]

        for report in reports:
            logging.info(report.display())

        paths = [self.path(REPORT_FILE), self.path(SWEEP_FILE), self.path(TABLE_FILE)]
        save_reports(paths[0], reports)
        save_sweep_csv(paths[1], sweeps)
        with open(paths[2], "w", encoding="utf-8") as fh:
            fh.write(comparison_table(reports, cfg.k_values))
        return paths


def run_stage(
    stage: str, config: PipelineConfig, methods: Optional[Sequence[str]] = None, **callbacks
) -> Dict[str, List[str]]:
    """Runs ``stage`` (or ``all``) with ``config``; see :class:`Pipeline`."""
    return Pipeline(config, methods, **callbacks).run(stage)
