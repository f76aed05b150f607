"""Project-file persistence: one JSON file per project, atomic saves with
optimistic concurrency via a strictly increasing revision counter."""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

from .hta import TaskTree, tree_from_dict, tree_to_dict
from .screening import CpcAssessment

_SLUG_RE = re.compile(r"^[a-z0-9][a-z0-9_-]*$")


class ProjectError(ValueError):
    pass


class ProjectNotFound(ProjectError):
    pass


class ProjectConflict(ProjectError):
    """On-disk revision is already past the incoming save's base revision."""


@dataclass(frozen=True)
class NamedAssessment:
    name: str
    choices: dict[int, str]
    label: str = ""


@dataclass(frozen=True)
class Project:
    id: str
    hta: TaskTree = TaskTree()
    assessments: tuple[NamedAssessment, ...] = ()
    taxonomy_override: dict | None = None
    notes: str = ""
    revision: int = 0


def project_to_dict(p: Project) -> dict:
    return {
        "id": p.id,
        "revision": p.revision,
        "notes": p.notes,
        "hta": tree_to_dict(p.hta),
        "assessments": [
            {"name": a.name, "label": a.label,
             "choices": {str(k): v for k, v in a.choices.items()}}
            for a in p.assessments
        ],
        "taxonomy_override": p.taxonomy_override,
    }


def project_from_dict(doc: dict) -> Project:
    return Project(
        id=str(doc["id"]),
        hta=tree_from_dict(doc.get("hta", {})),
        assessments=tuple(
            NamedAssessment(a["name"],
                            {int(k): v for k, v in a.get("choices", {}).items()},
                            a.get("label", ""))
            for a in doc.get("assessments", [])
        ),
        taxonomy_override=doc.get("taxonomy_override"),
        notes=doc.get("notes", ""),
        revision=int(doc.get("revision", 0)),
    )


def _path_for(projects_dir: Path, project_id: str) -> Path:
    if not _SLUG_RE.match(project_id):
        raise ProjectError(f"invalid project id {project_id!r}")
    return projects_dir / f"{project_id}.json"


def load_project(project_id: str, projects_dir: Path) -> Project:
    path = _path_for(projects_dir, project_id)
    if not path.exists():
        raise ProjectNotFound(f"no project {project_id!r} in {projects_dir}")
    return project_from_dict(json.loads(path.read_text(encoding="utf-8")))


def list_projects(projects_dir: Path) -> list[str]:
    if not projects_dir.is_dir():
        return []
    return sorted(p.stem for p in projects_dir.glob("*.json"))


def save_project(p: Project, projects_dir: Path) -> Project:
    """Atomic write-temp-then-rename save.

    ``p.revision`` is the base revision the caller loaded; the saved file
    carries ``base + 1``.  Racing saves from the same base: exactly one wins,
    the loser gets ProjectConflict.
    """
    projects_dir.mkdir(parents=True, exist_ok=True)
    path = _path_for(projects_dir, p.id)
    lock_path = path.with_suffix(".lock")

    # O_EXCL lock file serializes the check-then-rename window.
    try:
        lock_fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ProjectConflict(f"project {p.id!r} is being saved concurrently")
    try:
        if path.exists():
            on_disk = json.loads(path.read_text(encoding="utf-8"))
            if int(on_disk.get("revision", 0)) > p.revision:
                raise ProjectConflict(
                    f"project {p.id!r}: on-disk revision "
                    f"{on_disk.get('revision')} is newer than base {p.revision}")
        saved = replace(p, revision=p.revision + 1)
        fd, tmp = tempfile.mkstemp(dir=projects_dir, prefix=f".{p.id}.",
                                   suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(project_to_dict(saved), fh, indent=2)
                fh.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return saved
    finally:
        os.close(lock_fd)
        os.unlink(lock_path)
