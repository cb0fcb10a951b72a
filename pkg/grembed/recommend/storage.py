import json
from typing import Dict

from grembed.errors import MalformedLineError
from grembed.recommend.types import Recommendations, WeightedRecommendations
from grembed.utils import ensure_parent


def save_recommendations(path: str, recs: Recommendations) -> None:
    """Writes ``{user_id: [[business_id, weight], ...]}`` with users sorted."""
    payload: Dict[str, list] = {user: [[b, int(w)] for b, w in recs[user].items] for user in sorted(recs)}
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_recommendations(path: str) -> Recommendations:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as e:
            raise MalformedLineError(path, e.lineno, e.msg) from e
    return {
        user: WeightedRecommendations(user=user, items=[(b, int(w)) for b, w in items])
        for user, items in sorted(payload.items())
    }
