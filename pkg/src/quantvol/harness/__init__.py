from .fixtures import load_dataset
from .records import PolytopeRecord, parse_polytopes
