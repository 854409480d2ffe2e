# tools/help_tools.py
from langchain_core.tools import tool

# Guía de uso
GUIA_DE_USO = """
Aquí tienes algunos ejemplos de lo que puede hacer dopkit:

**Condiciones algebraicas (verify / solve-metric):**
* **Verificar:** `python cli.py verify --metric g.json --boundary gamma.json --weights 1,2`
  (g.json = {"a": "y + 8*x - 9*x^2", "b": "...", "c": "..."}, gamma.json = {"factors": ["..."]})
* **Resolver g dada Γ:** `python cli.py solve-metric --boundary gamma.json --weights 1,2`

**Densidades (density):**
* `python cli.py density --metric g.json --boundary gamma.json --weights 1,2 --at t0=1,t1=1`

**Ramas locales (branch-check):**
* `python cli.py branch-check --metric g.json --germ germ.json` con germ.json = {"xi": "t^2", "eta": "t^3"}

**Catálogo:**
* `python cli.py catalog list`
* `python cli.py catalog show B1`
* `python cli.py catalog instantiate B3 --params alpha=-1,beta=0`
* `python cli.py integrability B2 --params p=1/2,q=1/2`

**Numérico:**
* `python cli.py catalog instantiate B3 --params alpha=-1,beta=0 | python cli.py spectral --bundle - --degree 6 --order 48`
* `python cli.py curvature B5 --params n=2,c02=-1 --point 1/2,0`
* `python cli.py realization --m 1 --n 2 --count 1000`
* `python cli.py batch --manifest data/acceptance_grid.json --threads 4`

**API HTTP:** `uvicorn api:app` y luego `GET /catalog`, `POST /verify`, `POST /spectral`, `POST /pipeline`.
"""


@tool
def obtener_ejemplos_de_uso() -> str:
    """
    Se invoca cuando se pregunta 'qué puedes hacer', 'ayuda' o 'dame ejemplos'.
    Devuelve una guía de comandos y endpoints de dopkit.
    """
    return GUIA_DE_USO
