import logging
from typing import List, Set, Tuple

from grembed.errors import EmptyGraphError, MalformedLineError
from grembed.ingest.types import FriendshipList, RatingsTable, UserId
from grembed.socialgraph.similarity import similarity_weight
from grembed.socialgraph.types import GraphStats, WeightedGraph
from grembed.utils import ensure_parent, format_real

DEFAULT_EPSILON = 0.001


def build_weighted_graph(
    friendships: FriendshipList, ratings: RatingsTable, active: Set[UserId], epsilon: float = DEFAULT_EPSILON
) -> WeightedGraph:
    """Re-weights the friendship graph of active users by taste similarity.

    Friends with zero similarity keep the floor weight ``epsilon`` so the graph stays connected;
    with ``epsilon == 0`` their edge is dropped. Only users with a retained edge become nodes.

    Args:
        friendships (FriendshipList): Explicit, unweighted friendship pairs.
        ratings (RatingsTable): Liked/disliked sets per user.
        active (Set[UserId]): Users allowed in the graph.
        epsilon (float): Floor weight for zero-similarity friends, ``>= 0``.

    Returns:
        WeightedGraph: The implicit weighted graph.

    Raises:
        ValueError: If ``epsilon`` is negative.
        EmptyGraphError: If no edge is retained.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")

    edges: List[Tuple[UserId, UserId, float]] = []
    floored = dropped = 0
    for a, b in friendships:
        if a not in active or b not in active:
            continue
        w = similarity_weight(ratings.liked_by(a), ratings.disliked_by(a), ratings.liked_by(b), ratings.disliked_by(b))
        if w > 0:
            edges.append((a, b, w))
        elif epsilon > 0:
            edges.append((a, b, epsilon))
            floored += 1
        else:
            dropped += 1

    if not edges:
        raise EmptyGraphError("No friendship edge between active users survived weighting")

    logging.info(
        "Weighted graph: %d edges kept (%d at floor weight %g), %d zero-similarity edges dropped",
        len(edges),
        floored,
        epsilon,
        dropped,
    )
    users = {u for a, b, _ in edges for u in (a, b)}
    return WeightedGraph.from_edges(users, edges)


def graph_stats(graph: WeightedGraph) -> GraphStats:
    """Counts nodes and unordered edges and reports the average degree.

    Raises:
        EmptyGraphError: If the graph has no nodes.
    """
    if graph.n == 0:
        raise EmptyGraphError("Cannot compute statistics of an empty graph")
    edges = sum(len(nb) for nb in graph.neighbors) // 2
    return GraphStats(nodes=graph.n, edges=edges, avg_degree=2.0 * edges / graph.n)


def save_edge_list(path: str, graph: WeightedGraph) -> None:
    """Writes ``# nodes=<n> edges=<m>`` then one ``user<TAB>user<TAB>weight`` line per edge."""
    stats = graph_stats(graph)
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# nodes={stats.nodes} edges={stats.edges}\n")
        for i, j, w in graph.edges():
            fh.write(f"{graph.users[i]}\t{graph.users[j]}\t{format_real(w)}\n")


def load_edge_list(path: str) -> WeightedGraph:
    """Reads a graph written by :func:`save_edge_list`; weights round-trip bit-exactly.

    Raises:
        MalformedLineError: On a bad header, a bad line, or counts that disagree with the header.
    """
    edges: List[Tuple[UserId, UserId, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        try:
            fields = dict(part.split("=") for part in header.lstrip("#").split())
            nodes, count = int(fields["nodes"]), int(fields["edges"])
        except (KeyError, ValueError) as e:
            raise MalformedLineError(path, 1, f"expected '# nodes=<n> edges=<m>' header ({e})") from e

        for line_number, line in enumerate(fh, 2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise MalformedLineError(path, line_number, "expected user<TAB>user<TAB>weight")
            try:
                edges.append((parts[0], parts[1], float(parts[2])))
            except ValueError as e:
                raise MalformedLineError(path, line_number, str(e)) from e

    users = {u for a, b, _ in edges for u in (a, b)}
    if len(users) != nodes or len(edges) != count:
        raise MalformedLineError(
            path, 1, f"header declares {nodes} nodes/{count} edges, file holds {len(users)}/{len(edges)}"
        )
    return WeightedGraph.from_edges(users, edges)
