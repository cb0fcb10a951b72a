from typing import Callable, List


OnStageCompleteCallable = Callable[
    [
        str,  # Name of the stage that finished.
        float,  # Wall-clock seconds the stage took.
        List[str],  # Paths of the artifacts the stage wrote.
    ],
    None,  # The callable does not return any value (returns None).
]
"""
OnStageCompleteCallable is invoked after a pipeline stage has written all of its artifacts.
It receives the stage name, the elapsed wall-clock time and the list of written paths.
"""

OnStageErrorCallable = Callable[
    [
        str,  # Name of the stage that failed.
        Exception,  # The exception raised by the stage.
    ],
    None,  # The callable does not return any value (returns None).
]
"""
OnStageErrorCallable is invoked when a stage raises, before the exception propagates to the caller.
It can be used to log the failure or clean up partial artifacts.
"""
