// File delivery. The app takes a DownloadSink so tests can capture the
// exported document instead of touching the real browser download path.

export type DownloadSink = (filename: string, content: string, mediaType: string) => void;

export function browserDownload(filename: string, content: string, mediaType: string): void {
  const link = document.createElement('a');
  link.href = URL.createObjectURL(new Blob([content], { type: mediaType }));
  link.setAttribute('download', filename);
  document.body.appendChild(link);
  link.click();
  document.body.removeChild(link);
  URL.revokeObjectURL(link.href);
}
