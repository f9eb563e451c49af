import os

from online_unit_clustering.adversary.builtin_trees import BUILTIN_PREFIX, builtin_tree
from online_unit_clustering.adversary.strategy_tree import load_tree
from online_unit_clustering.errors import OffGridError
from online_unit_clustering.util import DEFAULT_SCALE, parse_position


def read_text_file(path):
    """ :raises FileNotFoundError: if `path` does not exist """
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def write_text_file(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def parse_points(text, scale=DEFAULT_SCALE):
    """ One decimal coordinate per line; blank lines and everything after a '#' are ignored.

    :raises OffGridError: for coordinates off the 1/`scale` grid
    :raises ValueError: for anything that is not a number, naming the line
    """
    points = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            points.append(parse_position(line, scale))
        except OffGridError:
            raise
        except ValueError as e:
            raise ValueError(f"line {number}: {e}")
    return points


def load_points_file(path, scale=DEFAULT_SCALE):
    return parse_points(read_text_file(path), scale)


def resolve_tree(identifier):
    """ Loads a strategy tree from "builtin:<name>" or from a JSON file path. """
    if identifier.startswith(BUILTIN_PREFIX):
        return builtin_tree(identifier)
    return load_tree(read_text_file(identifier))
