from unittest.mock import patch

import pytest

from algebraic_learning.services.command import CommandInvoker
from algebraic_learning.services.write_file_command import WriteFileCommand


class TestWriteFileCommand:
    """Test suite for file writes that can be taken back."""

    def test_execute_creates_parents(self, tmp_path):
        """Test that a nested path is created and returned."""
        path = tmp_path / "runs" / "epoch1.json"

        written = WriteFileCommand(path, "{}\n").execute()

        assert written == path
        assert path.read_text(encoding="utf-8") == "{}\n"

    @patch("algebraic_learning.services.write_file_command.logger")
    def test_undo_removes_a_new_file(self, mock_logger, tmp_path):
        """Test that undoing the write of a new file deletes it."""
        path = tmp_path / "records.csv"
        command = WriteFileCommand(path, "epoch\n")
        command.execute()

        command.undo()

        assert not path.exists()
        mock_logger.info.assert_called_once_with(f"Removed {path}")

    def test_undo_restores_previous_content(self, tmp_path):
        """Test that undoing an overwrite brings the old text back."""
        path = tmp_path / "model.json"
        path.write_text("old", encoding="utf-8")
        command = WriteFileCommand(path, "new")
        command.execute()

        command.undo()

        assert path.read_text(encoding="utf-8") == "old"

    def test_invoker_rolls_back_every_output(self, tmp_path):
        """Test that undo_all leaves the directory as it was."""
        kept = tmp_path / "kept.txt"
        kept.write_text("keep", encoding="utf-8")
        invoker = CommandInvoker()
        for path in (kept, tmp_path / "a.txt", tmp_path / "b.txt"):
            invoker.set_command(WriteFileCommand(path, "x"))
            invoker.execute_command()

        invoker.undo_all()

        assert sorted(p.name for p in tmp_path.iterdir()) == ["kept.txt"]
        assert kept.read_text(encoding="utf-8") == "keep"

    def test_undo_of_a_failed_write_does_nothing(self, tmp_path):
        """Test that undoing a write that raised leaves the target alone."""
        target = tmp_path / "taken"
        target.mkdir()
        command = WriteFileCommand(target, "x")

        with pytest.raises(OSError):
            command.execute()
        command.undo()

        assert target.is_dir()
